import init, { sample_schema, render_schema, prune_schema, estimate_costs } from "./pkg/schema_scalpel_wasm.js";

const $ = (id) => document.getElementById(id);

function showError(err) {
  $("error").textContent = err ? String(err.message ?? err) : "";
}

function setOutput(title, text) {
  $("output-title").textContent = title;
  $("output").textContent = text;
}

function clearTrace() {
  $("trace").querySelector("tbody").replaceChildren();
}

function cell(text, numeric) {
  const td = document.createElement("td");
  td.textContent = text ?? "";
  if (numeric) td.className = "num";
  return td;
}

function elementName(rec) {
  switch (rec.element) {
    case "node": return rec.label;
    case "node_property": return `${rec.label}.${rec.property}`;
    case "relationship": return `(:${rec.source})-[:${rec.type}]->(:${rec.target})`;
    case "relationship_property": return `[:${rec.type}].${rec.property}`;
    default: return "(whole schema)";
  }
}

function showTrace(trace) {
  const body = $("trace").querySelector("tbody");
  body.replaceChildren(...trace.map((rec) => {
    const tr = document.createElement("tr");
    tr.append(
      cell(rec.element ?? "-"),
      cell(elementName(rec)),
      cell(rec.kind),
      cell(rec.term),
      cell(rec.score == null ? "" : rec.score.toFixed(3), true),
    );
    return tr;
  }));
}

function run(action) {
  showError(null);
  try {
    action();
  } catch (err) {
    showError(err);
  }
}

function inputs() {
  return {
    schema: $("schema").value,
    question: $("question").value,
    strategy: $("strategy").value,
    threshold: Number($("threshold").value),
    format: $("format").value,
    instances: Math.max(0, Math.floor(Number($("instances").value))),
  };
}

function onRender() {
  const i = inputs();
  clearTrace();
  setOutput(`Rendered (${i.format})`, render_schema(i.schema, i.format));
}

function onPrune() {
  const i = inputs();
  const res = JSON.parse(prune_schema(i.schema, i.question, i.strategy, i.threshold, i.format));
  const kept = [...res.retained_labels, ...res.retained_relationships.map((k) => k.type)].join(", ");
  const note = res.fallback ? "nothing matched; full schema kept" : `kept ${kept}`;
  setOutput(`Pruned (${i.strategy}): ${note}`, res.rendered);
  showTrace(res.trace);
}

function onCost() {
  const i = inputs();
  const rows = JSON.parse(estimate_costs(i.schema, i.question, i.threshold, i.instances));
  const names = rows[0].costs.map((c) => c.pricing);
  const header = ["variant", "tokens", ...names];
  const lines = rows.map((r) => [r.variant, String(r.tokens), ...r.costs.map((c) => `$${c.display}`)]);
  const widths = header.map((h, col) => Math.max(h.length, ...lines.map((l) => l[col].length)));
  const fmt = (cells) => cells.map((c, col) => (col === 0 ? c.padEnd(widths[col]) : c.padStart(widths[col]))).join("  ");
  clearTrace();
  setOutput(
    `Cost of ${i.instances} prompts`,
    [fmt(header), widths.map((w) => "-".repeat(w)).join("  "), ...lines.map(fmt)].join("\n"),
  );
}

await init();
$("schema").value = sample_schema();
$("render-btn").addEventListener("click", () => run(onRender));
$("prune-btn").addEventListener("click", () => run(onPrune));
$("cost-btn").addEventListener("click", () => run(onCost));
run(onPrune);
