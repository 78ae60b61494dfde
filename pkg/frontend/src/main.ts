/** Browser bootstrap: wires the pure renderers and state to the DOM.
 * All optimization numbers on screen come from service responses; this
 * file only routes events and re-renders. */

import { ApiClient } from "./api.js";
import { dataPatch, removeConstraint, summarize } from "./patches.js";
import {
  renderCatalog,
  renderCompare,
  renderConnectionError,
  renderDiff,
  renderDraft,
  renderHistory,
  renderParamPage,
} from "./render.js";
import { AppState } from "./state.js";

const baseUrl =
  new URLSearchParams(window.location.search).get("api") ??
  window.location.origin;
const state = new AppState(new ApiClient(baseUrl));

function rerender(): void {
  const root = document.getElementById("app");
  if (!root) return;
  const pieces = [renderConnectionError(state.connectionError)];
  if (state.catalog) pieces.push(renderCatalog(state.catalog));
  pieces.push(
    renderDraft(
      state.draft.map(summarize),
      state.draftError,
      state.submitDisabled,
    ),
  );
  if (state.lastDiff && state.history.length > 0)
    pieces.push(
      renderDiff(state.lastDiff, state.history[state.history.length - 1].id),
    );
  pieces.push(renderHistory(state.history));
  root.innerHTML = pieces.join("\n");
}

async function showParam(name: string, page = 1): Promise<void> {
  const payload = await state.api.getParamPage(name, page);
  const host = document.getElementById("param-view");
  if (host) host.innerHTML = renderParamPage(payload);
}

function readDataPatchForm(): void {
  const param = (document.getElementById("dp-param") as HTMLInputElement)
    ?.value;
  const op = (document.getElementById("dp-op") as HTMLSelectElement)
    ?.value as "set" | "scale";
  const value = Number(
    (document.getElementById("dp-value") as HTMLInputElement)?.value,
  );
  const problem = state.addPatch(dataPatch(param, op, value));
  if (problem) state.connectionError = problem;
  rerender();
}

function readStructPatchForm(): void {
  const name = (document.getElementById("sp-constraint") as HTMLInputElement)
    ?.value;
  const problem = state.addPatch(removeConstraint(name));
  if (problem) state.connectionError = problem;
  rerender();
}

document.addEventListener("click", (event) => {
  const target = event.target as HTMLElement;
  const action = target.dataset.action;
  if (!action) {
    const paramRow = target.closest("tr[data-param]") as HTMLElement | null;
    if (paramRow?.dataset.param) void showParam(paramRow.dataset.param);
    return;
  }
  if (action === "submit") {
    void state.submitScenario().then(rerender);
  } else if (action === "remove-patch") {
    state.removePatch(Number(target.dataset.index));
    rerender();
  } else if (action === "add-data-patch") {
    readDataPatchForm();
  } else if (action === "add-struct-patch") {
    readStructPatchForm();
  } else if (action === "export-history") {
    const blob = new Blob([state.exportHistory()], {
      type: "application/json",
    });
    const link = document.createElement("a");
    link.href = URL.createObjectURL(blob);
    link.download = "scenario_history.json";
    link.click();
  } else if (action === "compare") {
    const ids = state.history.slice(-2).map((e) => e.id);
    const host = document.getElementById("compare-view");
    if (host) host.innerHTML = renderCompare(state.compare(ids));
  }
});

void state.loadBase().then(rerender);
