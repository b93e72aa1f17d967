export type Mode = "naive" | "agentic";

export interface SessionInfo {
  session_id: string;
  mode: Mode;
}

export interface ArtifactDescriptor {
  id: string;
  kind: string; // csv | plot | map
  title: string;
  url: string;
}

export interface QueryResponse {
  mode: Mode;
  answer: string;
  succeeded: boolean;
  artifacts: ArtifactDescriptor[];
  trajectory_id: string | null;
  sql_gen_calls: number;
  sql?: string;
  error?: string | null;
}

export interface ChatTurn {
  question: string;
  mode: Mode;
  response?: QueryResponse;
  error?: string;
}

export interface TrajectoryAction {
  tool: string;
  args: Record<string, unknown>;
  error?: string | null;
}

export interface TrajectoryStep {
  index: number;
  thought: string;
  action: TrajectoryAction;
  observation: string;
  status: "ok" | "tool_error" | "parse_error";
}

export interface Trajectory {
  trajectory_id: string;
  question: string;
  answer: string;
  succeeded: boolean;
  sql_gen_calls: number;
  steps: TrajectoryStep[];
}
