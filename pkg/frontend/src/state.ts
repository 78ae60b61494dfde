/** Application state and the scenario flows.
 *
 * History is append-only within a session; the base view is never
 * mutated by a scenario; one submission is in flight at a time.
 */

import { ApiClient, ApiError } from "./api.js";
import {
  PatchDraft,
  serializeDraftList,
  summarize,
  validateDraft,
} from "./patches.js";
import type {
  ModelCatalog,
  ScenarioDiff,
  ScenarioErrorBody,
  SolutionPayload,
} from "./types.js";

export interface HistoryEntry {
  id: string;
  patchSummaries: string[];
  category: "data" | "structural" | "mixed" | "empty";
  baseObjective: number | null;
  newObjective: number | null;
  baseStatus: string;
  newStatus: string;
  timestamp: string;
  stale: boolean;
  diff: ScenarioDiff;
}

export interface DraftError {
  patchIndex: number;
  message: string;
}

export class AppState {
  catalog: ModelCatalog | null = null;
  baseSolution: SolutionPayload | null = null;
  draft: PatchDraft[] = [];
  history: HistoryEntry[] = [];
  lastDiff: ScenarioDiff | null = null;
  draftError: DraftError | null = null;
  connectionError: string | null = null;
  submitting = false;

  constructor(readonly api: ApiClient) {}

  async loadBase(): Promise<void> {
    try {
      this.catalog = await this.api.getModel();
      this.baseSolution = await this.api.getSolution();
      this.connectionError = null;
    } catch (err) {
      this.connectionError = `cannot reach the scenario service: ${err}`;
    }
  }

  addPatch(draft: PatchDraft): string | null {
    const problem = validateDraft(draft);
    if (problem !== null) return problem;
    this.draft.push(draft);
    return null;
  }

  removePatch(index: number): void {
    this.draft.splice(index, 1);
    if (this.draftError && this.draftError.patchIndex === index)
      this.draftError = null;
  }

  get submitDisabled(): boolean {
    return this.draft.length === 0 || this.submitting;
  }

  private category(): HistoryEntry["category"] {
    const kinds = new Set(this.draft.map((p) => p.kind));
    if (kinds.size === 0) return "empty";
    if (kinds.size === 2) return "mixed";
    return kinds.has("data") ? "data" : "structural";
  }

  async submitScenario(): Promise<HistoryEntry | null> {
    if (this.submitDisabled) return null;
    this.submitting = true;
    this.draftError = null;
    try {
      const response = await this.api.postScenario(
        serializeDraftList(this.draft),
      );
      const entry: HistoryEntry = {
        id: response.id,
        patchSummaries: this.draft.map(summarize),
        category: this.category(),
        baseObjective: response.diff.base_objective,
        newObjective: response.diff.new_objective,
        baseStatus: response.diff.base_status,
        newStatus: response.diff.new_status,
        timestamp: new Date().toISOString(),
        stale: false,
        diff: response.diff,
      };
      this.history.push(entry);
      this.lastDiff = response.diff;
      this.draft = [];
      return entry;
    } catch (err) {
      if (err instanceof ApiError && err.status === 422) {
        const body = err.body as ScenarioErrorBody;
        this.draftError = {
          patchIndex: body.patch_index ?? 0,
          message: reportText(body),
        };
        return null;
      }
      this.connectionError = `scenario submission failed: ${err}`;
      return null;
    } finally {
      this.submitting = false;
    }
  }

  async deleteScenario(id: string): Promise<void> {
    const ok = await this.api.deleteScenario(id);
    const entry = this.history.find((e) => e.id === id);
    if (entry) entry.stale = !ok ? entry.stale : true;
  }

  /** Entries for a side-by-side comparison; unknown ids come back as
   * stale placeholder rows rather than errors. */
  compare(ids: string[]): (HistoryEntry | { id: string; stale: true })[] {
    return ids.map(
      (id) => this.history.find((e) => e.id === id) ?? { id, stale: true as const },
    );
  }

  exportHistory(): string {
    return JSON.stringify(
      this.history.map((e) => ({
        id: e.id,
        patch_summaries: e.patchSummaries,
        category: e.category,
        base_objective: e.baseObjective,
        new_objective: e.newObjective,
        base_status: e.baseStatus,
        new_status: e.newStatus,
        timestamp: e.timestamp,
      })),
      null,
      2,
    );
  }
}

function reportText(body: ScenarioErrorBody): string {
  if (body.report && body.report.errors.length > 0) {
    return body.report.errors
      .map((issue) => `${issue.path}: ${issue.message}`)
      .join("; ");
  }
  return body.error;
}
