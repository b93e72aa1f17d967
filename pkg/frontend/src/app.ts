// Browser bootstrap: session lifecycle, submit handling, trajectory panel.

import { ApiClient, validateQuestion } from "./api.js";
import { renderTrajectory, renderTurn } from "./render.js";
import type { ChatTurn, Mode } from "./types.js";

export class ChatApp {
  private turns: ChatTurn[] = [];
  private sessionId: string | null = null;
  private mode: Mode = "agentic";
  private busy = false;

  constructor(
    private api: ApiClient,
    private root: Document,
  ) {}

  async start(): Promise<void> {
    const modeSelect = this.root.getElementById("mode") as HTMLSelectElement;
    const form = this.root.getElementById("ask-form") as HTMLFormElement;
    modeSelect.addEventListener("change", () => {
      this.mode = modeSelect.value as Mode;
      this.sessionId = null; // a mode switch starts a fresh session
      this.setStatus(`mode: ${this.mode} (new session on next question)`);
    });
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.submit();
    });
    this.root.addEventListener("click", (event) => {
      const target = event.target as HTMLElement;
      if (target.matches("button.show-trajectory")) {
        void this.showTrajectory(target.dataset.trajectory ?? "");
      }
      if (target.matches("button.retry")) {
        void this.retry(Number(target.dataset.retry));
      }
    });
    await this.ensureSession();
  }

  private async ensureSession(): Promise<string> {
    if (!this.sessionId) {
      const info = await this.api.createSession(this.mode);
      this.sessionId = info.session_id;
      this.setStatus(`session ${info.session_id} (${info.mode})`);
    }
    return this.sessionId;
  }

  async submit(): Promise<void> {
    const input = this.root.getElementById("question") as HTMLInputElement;
    const problem = validateQuestion(input.value);
    if (problem) {
      this.setStatus(problem);
      return;
    }
    if (this.busy) return;
    const question = input.value.trim();
    input.value = "";
    await this.runQuestion(question);
  }

  private async retry(turnIndex: number): Promise<void> {
    const turn = this.turns[turnIndex];
    if (!turn || this.busy) return;
    this.turns.splice(turnIndex, 1);
    await this.runQuestion(turn.question);
  }

  private async runQuestion(question: string): Promise<void> {
    this.busy = true;
    this.setBusy(true);
    const turn: ChatTurn = { question, mode: this.mode };
    this.turns.push(turn);
    this.paint();
    try {
      const sessionId = await this.ensureSession();
      turn.response = await this.api.query(sessionId, question);
    } catch (err) {
      turn.error = err instanceof Error ? err.message : String(err);
    } finally {
      this.busy = false;
      this.setBusy(false);
      this.paint();
    }
  }

  private async showTrajectory(trajectoryId: string): Promise<void> {
    const panel = this.root.getElementById("trajectory-panel") as HTMLElement;
    if (!this.sessionId || !trajectoryId) return;
    try {
      const trajectory = await this.api.fetchTrajectory(this.sessionId, trajectoryId);
      panel.innerHTML = renderTrajectory(trajectory);
      panel.classList.add("open");
    } catch (err) {
      panel.innerHTML = `<div class="trajectory error">could not load trajectory: ${
        err instanceof Error ? err.message : String(err)
      }</div>`;
      panel.classList.add("open");
    }
  }

  private paint(): void {
    const log = this.root.getElementById("chat-log") as HTMLElement;
    log.innerHTML = this.turns.map((t, i) => renderTurn(t, i)).join("\n");
    log.scrollTop = log.scrollHeight;
  }

  private setBusy(busy: boolean): void {
    const button = this.root.getElementById("send") as HTMLButtonElement;
    const input = this.root.getElementById("question") as HTMLInputElement;
    button.disabled = busy;
    input.disabled = busy;
  }

  private setStatus(text: string): void {
    const el = this.root.getElementById("status") as HTMLElement;
    el.textContent = text;
  }
}

declare global {
  interface Window {
    geoagentApp?: ChatApp;
  }
}

if (typeof window !== "undefined" && typeof document !== "undefined") {
  const app = new ChatApp(new ApiClient(""), document);
  window.geoagentApp = app;
  window.addEventListener("DOMContentLoaded", () => void app.start());
}
