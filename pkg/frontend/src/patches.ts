/** Patch drafts and their serialization to the service's patch JSON.
 *
 * Data patches and structural patches get separate builders so the two
 * what-if categories can never mix inside one patch object. A draft
 * serializes to exactly the JSON the service's patch parser accepts.
 */

export type SelectorKind = "all" | "key" | "prefix";

export interface DataPatchDraft {
  kind: "data";
  param: string;
  selectorKind: SelectorKind;
  selector: string[];
  op: "set" | "scale";
  value: number;
}

export type StructAction =
  | "add_constraint"
  | "remove_constraint"
  | "set_sense"
  | "set_rhs_constant_shift"
  | "set_variable_bound"
  | "fix_variable";

export interface StructPatchDraft {
  kind: "struct";
  action: StructAction;
  name?: string;
  definition?: unknown;
  sense?: string;
  delta?: number;
  variable?: string;
  key?: string[];
  lb?: number;
  ub?: number;
  value?: number;
}

export type PatchDraft = DataPatchDraft | StructPatchDraft;

export function dataPatch(
  param: string,
  op: "set" | "scale",
  value: number,
  selectorKind: SelectorKind = "all",
  selector: string[] = [],
): DataPatchDraft {
  return { kind: "data", param, op, value, selectorKind, selector };
}

export function removeConstraint(name: string): StructPatchDraft {
  return { kind: "struct", action: "remove_constraint", name };
}

export function setSense(name: string, sense: string): StructPatchDraft {
  return { kind: "struct", action: "set_sense", name, sense };
}

export function shiftRhs(name: string, delta: number): StructPatchDraft {
  return { kind: "struct", action: "set_rhs_constant_shift", name, delta };
}

export function setVariableBound(
  variable: string,
  lb?: number,
  ub?: number,
): StructPatchDraft {
  return { kind: "struct", action: "set_variable_bound", variable, lb, ub };
}

export function fixVariable(
  variable: string,
  key: string[],
  value: number,
): StructPatchDraft {
  return { kind: "struct", action: "fix_variable", variable, key, value };
}

export function validateDraft(draft: PatchDraft): string | null {
  if (draft.kind === "data") {
    if (!draft.param) return "pick a parameter";
    if (!Number.isFinite(draft.value)) return "value must be a number";
    if (draft.op === "scale" && draft.value <= 0)
      return "scale factor must be positive";
    if (draft.op === "set" && draft.selectorKind !== "key")
      return "set requires an exact key";
    if (draft.selectorKind !== "all" && draft.selector.length === 0)
      return "selector needs at least one key component";
    return null;
  }
  switch (draft.action) {
    case "remove_constraint":
    case "set_sense":
    case "set_rhs_constant_shift":
    case "add_constraint":
      return draft.name ? null : "pick a constraint";
    case "set_variable_bound":
    case "fix_variable":
      return draft.variable ? null : "pick a variable";
  }
}

/** Serialize one draft to the wire format. */
export function serializePatch(draft: PatchDraft): Record<string, unknown> {
  if (draft.kind === "data") {
    const selector =
      draft.selectorKind === "all"
        ? { type: "all" }
        : draft.selectorKind === "key"
          ? { type: "key", key: draft.selector }
          : { type: "prefix", prefix: draft.selector };
    return {
      kind: "data",
      param: draft.param,
      selector,
      op: draft.op,
      value: draft.value,
    };
  }
  const out: Record<string, unknown> = { kind: "struct", action: draft.action };
  for (const field of [
    "name",
    "definition",
    "sense",
    "delta",
    "variable",
    "key",
    "lb",
    "ub",
    "value",
  ] as const) {
    const v = draft[field];
    if (v !== undefined) out[field] = v;
  }
  return out;
}

export function serializeDraftList(drafts: PatchDraft[]): Record<string, unknown>[] {
  return drafts.map(serializePatch);
}

/** One-line description for history rows, tagged by category. */
export function summarize(draft: PatchDraft): string {
  if (draft.kind === "data") {
    const sel =
      draft.selectorKind === "all"
        ? "all"
        : `${draft.selectorKind} ${draft.selector.join("/")}`;
    return `data: ${draft.op} ${draft.param} [${sel}] ${draft.value}`;
  }
  const target = draft.name ?? draft.variable ?? "";
  return `structural: ${draft.action} ${target}`.trim();
}
