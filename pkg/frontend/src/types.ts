/** Payload shapes of the scenario service API. */

export interface ModelStats {
  variables: {
    by_group: Record<string, number>;
    continuous: number;
    binary: number;
    total: number;
  };
  constraints: { by_family: Record<string, number>; total: number };
  nonzeros: number;
}

export interface ParameterInfo {
  name: string;
  domain: string[];
  source: string;
  rows: number;
  missing_default: string;
  page_size: number;
}

export interface ConstraintInfo {
  name: string;
  sense: string;
  domain: string[];
}

export interface ModelCatalog {
  problem_class: string;
  model_type: string;
  sense: string;
  stats: ModelStats;
  sets: Record<string, number>;
  parameters: ParameterInfo[];
  constraints: ConstraintInfo[];
}

export interface ParamPage {
  name: string;
  page: number;
  page_size: number;
  total_rows: number;
  total_pages: number;
  rows: Record<string, string>[];
}

export interface VariableDelta {
  group: string;
  key: string[];
  base: number;
  new: number;
  delta: number;
}

export interface ScenarioDiff {
  base_objective: number | null;
  new_objective: number | null;
  objective_delta: number | null;
  base_status: string;
  new_status: string;
  changed_variables: number;
  top_deltas: VariableDelta[];
}

export interface ScenarioResponse {
  id: string;
  diff: ScenarioDiff;
}

export interface SolutionPayload {
  status: string;
  objective: number | null;
  groups: {
    group: string;
    dimension_labels: string[];
    values: [string[], number][];
  }[];
}

export interface ValidationIssue {
  code: string;
  path: string;
  message: string;
}

export interface ScenarioErrorBody {
  error: string;
  patch_index?: number;
  report?: { ok: boolean; errors: ValidationIssue[]; warnings: ValidationIssue[] };
}
