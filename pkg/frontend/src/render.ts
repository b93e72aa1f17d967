// Pure HTML builders. Keeping these free of DOM access makes the rendering
// logic testable in node; app.ts wires the strings into the page.

import type {
  ArtifactDescriptor,
  ChatTurn,
  Trajectory,
  TrajectoryStep,
} from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;")
    .replaceAll("'", "&#39;");
}

/** Inline rendering by artifact kind: SVG as image, map in a frame, CSV as link. */
export function renderArtifact(artifact: ArtifactDescriptor, baseUrl = ""): string {
  const url = `${baseUrl}${artifact.url}`;
  const title = escapeHtml(artifact.title || artifact.id);
  switch (artifact.kind) {
    case "plot":
      return `<figure class="artifact plot"><img src="${url}" alt="${title}" /><figcaption>${title}</figcaption></figure>`;
    case "map":
      return `<figure class="artifact map"><iframe src="${url}" title="${title}" loading="lazy"></iframe><figcaption>${title}</figcaption></figure>`;
    default:
      return `<div class="artifact file"><a href="${url}" download>${escapeHtml(artifact.id)} (${escapeHtml(artifact.kind)})</a></div>`;
  }
}

export function renderTurn(turn: ChatTurn, index: number, baseUrl = ""): string {
  const parts: string[] = [
    `<div class="turn" data-turn="${index}">`,
    `<div class="bubble user">${escapeHtml(turn.question)}</div>`,
  ];
  const badge = `<span class="badge ${turn.mode}">${turn.mode}</span>`;

  if (turn.error !== undefined) {
    parts.push(
      `<div class="bubble error">${badge}${escapeHtml(turn.error)} ` +
        `<button class="retry" data-retry="${index}">Retry</button></div>`,
    );
  } else if (turn.response === undefined) {
    parts.push(`<div class="bubble assistant pending">${badge}…</div>`);
  } else {
    const r = turn.response;
    parts.push(
      `<div class="bubble assistant${r.succeeded ? "" : " failed"}">` +
        `${badge}<div class="answer">${escapeHtml(r.answer)}</div></div>`,
    );
    for (const artifact of r.artifacts) {
      if (artifact.kind === "plot" || artifact.kind === "map") {
        parts.push(renderArtifact(artifact, baseUrl));
      }
    }
    const files = r.artifacts.filter((a) => a.kind !== "plot" && a.kind !== "map");
    if (files.length) {
      parts.push(
        `<div class="files">${files.map((a) => renderArtifact(a, baseUrl)).join("")}</div>`,
      );
    }
    if (turn.mode === "agentic" && r.trajectory_id) {
      parts.push(
        `<button class="show-trajectory" data-trajectory="${escapeHtml(r.trajectory_id)}" ` +
          `data-turn="${index}">Show agent steps</button>`,
      );
    }
  }
  parts.push("</div>");
  return parts.join("\n");
}

function renderStep(step: TrajectoryStep): string {
  const args = escapeHtml(JSON.stringify(step.action.args));
  const tool = step.action.tool || "(unparsed)";
  const observation =
    step.observation.length > 400
      ? `${step.observation.slice(0, 400)}…`
      : step.observation;
  return (
    `<li class="step ${step.status}">` +
    `<div class="step-head"><span class="step-index">${step.index}</span>` +
    `<span class="tool">${escapeHtml(tool)}</span>` +
    `<span class="status ${step.status}">${step.status}</span></div>` +
    (step.thought ? `<div class="thought">${escapeHtml(step.thought)}</div>` : "") +
    `<code class="args">${args}</code>` +
    `<pre class="observation">${escapeHtml(observation)}</pre>` +
    `</li>`
  );
}

export function renderTrajectory(trajectory: Trajectory): string {
  return (
    `<div class="trajectory">` +
    `<div class="trajectory-head">${escapeHtml(trajectory.trajectory_id)}: ` +
    `${trajectory.steps.length} steps, ${trajectory.sql_gen_calls} SQL generations</div>` +
    `<ol class="steps">${trajectory.steps.map(renderStep).join("")}</ol>` +
    `</div>`
  );
}
