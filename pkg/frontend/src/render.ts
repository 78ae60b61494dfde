/** Pure renderers: state in, HTML strings out.
 *
 * Keeping these free of DOM and fetch calls is what lets the end-to-end
 * test drive the real service and assert on exactly what a browser would
 * show. Every number printed here comes from a service payload.
 */

import type { HistoryEntry } from "./state.js";
import type {
  ModelCatalog,
  ParamPage,
  ScenarioDiff,
} from "./types.js";

export function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function num(value: number | null): string {
  if (value === null) return "-";
  return Number.isInteger(value) ? String(value) : value.toFixed(4);
}

export function renderCatalog(catalog: ModelCatalog): string {
  const sets = Object.entries(catalog.sets)
    .map(([name, size]) => `<li>${esc(name)}: ${size} elements</li>`)
    .join("");
  const params = catalog.parameters
    .map((p) => {
      const badge =
        p.rows === 0 ? '<span class="badge empty">0 rows</span>'
          : `<span class="badge">${p.rows} rows</span>`;
      const pages = Math.max(1, Math.ceil(p.rows / p.page_size));
      return (
        `<tr data-param="${esc(p.name)}"><td>${esc(p.name)}</td>` +
        `<td>${esc(p.domain.join(" x ") || "scalar")}</td>` +
        `<td>${badge}</td><td>${pages} page(s)</td>` +
        `<td>${esc(p.missing_default)}</td></tr>`
      );
    })
    .join("");
  const constraints = catalog.constraints
    .map(
      (c) =>
        `<tr data-constraint="${esc(c.name)}"><td>${esc(c.name)}</td>` +
        `<td><code>${esc(c.sense)}</code></td>` +
        `<td>${esc(c.domain.join(" x ") || "global")}</td></tr>`,
    )
    .join("");
  const stats = catalog.stats;
  return `
<section id="catalog">
  <h2>${esc(catalog.problem_class)} <small>${esc(catalog.model_type)}, ${esc(catalog.sense)}</small></h2>
  <p class="stats">variables: ${stats.variables.total}
    (${stats.variables.continuous} continuous, ${stats.variables.binary} binary);
    constraints: ${stats.constraints.total}; nonzeros: ${stats.nonzeros}</p>
  <h3>Sets</h3><ul>${sets}</ul>
  <h3>Parameters</h3>
  <table><thead><tr><th>name</th><th>domain</th><th>rows</th><th>pages</th><th>missing</th></tr></thead>
  <tbody>${params}</tbody></table>
  <h3>Constraints</h3>
  <table><thead><tr><th>name</th><th>sense</th><th>domain</th></tr></thead>
  <tbody>${constraints}</tbody></table>
</section>`;
}

export function renderParamPage(page: ParamPage, filter = ""): string {
  const needle = filter.toLowerCase();
  const rows = page.rows.filter(
    (row) =>
      !needle ||
      Object.values(row).some((cell) => cell.toLowerCase().includes(needle)),
  );
  const columns = rows.length > 0 ? Object.keys(rows[0]) : [];
  const head = columns.map((c) => `<th>${esc(c)}</th>`).join("");
  const body = rows
    .map(
      (row) =>
        `<tr>${columns.map((c) => `<td>${esc(row[c])}</td>`).join("")}</tr>`,
    )
    .join("");
  return `
<section id="param-${esc(page.name)}">
  <h3>${esc(page.name)} - page ${page.page} of ${page.total_pages}
    (${page.total_rows} rows)</h3>
  <table><thead><tr>${head}</tr></thead><tbody>${body}</tbody></table>
</section>`;
}

export function renderDiff(diff: ScenarioDiff, id: string): string {
  const delta = diff.objective_delta;
  const sign = delta === null ? "" : delta >= 0 ? "+" : "";
  const deltas = diff.top_deltas
    .map(
      (d) =>
        `<tr><td>${esc(d.group)}</td><td>${esc(d.key.join(", "))}</td>` +
        `<td>${num(d.base)}</td><td>${num(d.new)}</td>` +
        `<td>${num(d.delta)}</td></tr>`,
    )
    .join("");
  return `
<section id="diff" data-scenario="${esc(id)}">
  <h2>Scenario ${esc(id)}</h2>
  <p>status: <span class="status">${esc(diff.base_status)} → ${esc(diff.new_status)}</span></p>
  <p>objective: <span id="base-objective">${num(diff.base_objective)}</span>
     → <span id="new-objective">${num(diff.new_objective)}</span>
     (<span id="objective-delta">${sign}${num(delta)}</span>)</p>
  <p>${diff.changed_variables} variable(s) changed</p>
  <table><thead><tr><th>group</th><th>key</th><th>base</th><th>new</th><th>delta</th></tr></thead>
  <tbody>${deltas}</tbody></table>
</section>`;
}

export function renderHistory(entries: HistoryEntry[]): string {
  const rows = entries
    .map(
      (e) =>
        `<tr data-id="${esc(e.id)}" class="${e.stale ? "stale" : ""}">` +
        `<td>${esc(e.id)}</td><td class="category">${esc(e.category)}</td>` +
        `<td>${esc(e.patchSummaries.join("; "))}</td>` +
        `<td>${num(e.baseObjective)}</td><td>${num(e.newObjective)}</td>` +
        `<td>${esc(e.baseStatus)}/${esc(e.newStatus)}</td>` +
        `<td>${esc(e.timestamp)}</td></tr>`,
    )
    .join("");
  return `
<section id="history">
  <h2>Scenario history</h2>
  <table><thead><tr><th>id</th><th>category</th><th>patches</th>
  <th>base</th><th>new</th><th>status</th><th>when</th></tr></thead>
  <tbody>${rows}</tbody></table>
</section>`;
}

export function renderCompare(
  entries: (HistoryEntry | { id: string; stale: true })[],
): string {
  const columns = entries
    .map((e) => {
      if (!("diff" in e)) {
        return `<td class="stale" data-id="${esc(e.id)}">stale</td>`;
      }
      return (
        `<td data-id="${esc(e.id)}">objective ${num(e.newObjective)}<br>` +
        `status ${esc(e.newStatus)}</td>`
      );
    })
    .join("");
  const heads = entries.map((e) => `<th>${esc(e.id)}</th>`).join("");
  return `
<section id="compare">
  <h2>Compare scenarios</h2>
  <table><thead><tr>${heads}</tr></thead><tbody><tr>${columns}</tr></tbody></table>
</section>`;
}

export function renderDraft(
  drafts: string[],
  error: { patchIndex: number; message: string } | null,
  submitDisabled: boolean,
): string {
  const rows = drafts
    .map((summary, i) => {
      const inline =
        error && error.patchIndex === i
          ? `<div class="patch-error">${esc(error.message)}</div>`
          : "";
      return `<li data-index="${i}">${esc(summary)}
        <button data-action="remove-patch" data-index="${i}">remove</button>${inline}</li>`;
    })
    .join("");
  return `
<section id="draft">
  <h2>Scenario draft</h2>
  <ol>${rows}</ol>
  <button id="submit" data-action="submit" ${submitDisabled ? "disabled" : ""}>
    Submit scenario</button>
</section>`;
}

export function renderConnectionError(message: string | null): string {
  if (!message) return "";
  return `<div id="connection-error" class="banner">${esc(message)}</div>`;
}
