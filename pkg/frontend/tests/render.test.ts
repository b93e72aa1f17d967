import { describe, expect, it } from "vitest";

import { escapeHtml, renderArtifact, renderTrajectory, renderTurn } from "../src/render.js";
import type { ChatTurn, Trajectory } from "../src/types.js";

const mapArtifact = { id: "map-0001", kind: "map", title: "Gym locations", url: "/sessions/s1/artifacts/map-0001" };
const plotArtifact = { id: "plot-0001", kind: "plot", title: "Hourly", url: "/sessions/s1/artifacts/plot-0001" };
const csvArtifact = { id: "res-0001", kind: "csv", title: "rows", url: "/sessions/s1/artifacts/res-0001" };

describe("renderArtifact", () => {
  it("renders maps in an iframe", () => {
    const html = renderArtifact(mapArtifact);
    expect(html).toContain("<iframe");
    expect(html).toContain('src="/sessions/s1/artifacts/map-0001"');
  });

  it("renders plots as images", () => {
    expect(renderArtifact(plotArtifact)).toContain("<img");
  });

  it("renders csv as a download link", () => {
    const html = renderArtifact(csvArtifact);
    expect(html).toContain("<a");
    expect(html).toContain("download");
  });

  it("prefixes a base url", () => {
    expect(renderArtifact(mapArtifact, "http://x:1")).toContain(
      'src="http://x:1/sessions/s1/artifacts/map-0001"',
    );
  });
});

describe("renderTurn", () => {
  const base: ChatTurn = {
    question: "Where are most gyms located?",
    mode: "agentic",
    response: {
      mode: "agentic",
      answer: "Gyms cluster in Manhattan.",
      succeeded: true,
      artifacts: [mapArtifact, csvArtifact],
      trajectory_id: "trajectory-0001",
      sql_gen_calls: 1,
    },
  };

  it("shows question, answer, inline map, and a trajectory button", () => {
    const html = renderTurn(base, 0);
    expect(html).toContain("Where are most gyms located?");
    expect(html).toContain("Gyms cluster in Manhattan.");
    expect(html).toContain("<iframe");
    expect(html).toContain('data-trajectory="trajectory-0001"');
  });

  it("hides the trajectory control for naive turns", () => {
    const naive: ChatTurn = {
      question: "q",
      mode: "naive",
      response: { ...base.response!, mode: "naive", trajectory_id: null },
    };
    expect(renderTurn(naive, 0)).not.toContain("show-trajectory");
  });

  it("renders the error state with a retry control", () => {
    const html = renderTurn({ question: "q", mode: "agentic", error: "backend 503" }, 2);
    expect(html).toContain("backend 503");
    expect(html).toContain('data-retry="2"');
  });

  it("renders a pending bubble before the response lands", () => {
    expect(renderTurn({ question: "q", mode: "agentic" }, 0)).toContain("pending");
  });

  it("escapes markup in answers", () => {
    const hostile: ChatTurn = {
      question: "<script>alert(1)</script>",
      mode: "agentic",
      response: { ...base.response!, answer: "<b>bold</b>" },
    };
    const html = renderTurn(hostile, 0);
    expect(html).not.toContain("<script>");
    expect(html).toContain("&lt;script&gt;");
    expect(html).toContain("&lt;b&gt;bold&lt;/b&gt;");
  });
});

describe("renderTrajectory", () => {
  const trajectory: Trajectory = {
    trajectory_id: "trajectory-0001",
    question: "q",
    answer: "a",
    succeeded: true,
    sql_gen_calls: 1,
    steps: [
      {
        index: 0,
        thought: "look at schema",
        action: { tool: "get_database_schema", args: {} },
        observation: "checkins_nyc(...)",
        status: "ok",
      },
      {
        index: 1,
        thought: "",
        action: { tool: "execute_on_database", args: { sql: "SELECT 1" } },
        observation: "blocked",
        status: "tool_error",
      },
      {
        index: 2,
        thought: "",
        action: { tool: "", args: {}, error: "no block" },
        observation: "could not parse",
        status: "parse_error",
      },
    ],
  };

  it("renders each step with tool, args, and status class", () => {
    const html = renderTrajectory(trajectory);
    expect(html).toContain("get_database_schema");
    expect(html).toContain("execute_on_database");
    expect((html.match(/<li class="step/g) ?? []).length).toBe(3);
    expect(html).toContain('class="step tool_error"');
    expect(html).toContain('class="step parse_error"');
    expect(html).toContain("3 steps");
  });

  it("flags unparsed actions visually", () => {
    expect(renderTrajectory(trajectory)).toContain("(unparsed)");
  });
});

describe("escapeHtml", () => {
  it("covers the five special characters", () => {
    expect(escapeHtml(`&<>"'`)).toBe("&amp;&lt;&gt;&quot;&#39;");
  });
});
