// DOM wiring. All physics comes from the service; this file only moves
// values between inputs, requests, and the SVG plot.

import { ServiceClient, ServiceError } from "./api.js";
import {
  applyResponse,
  badges,
  canSubmit,
  claimSeq,
  dismissBadge,
  initialState,
  MAX_SNAPSHOTS,
  pinSnapshot,
  removeSnapshot,
  SessionState,
  validateForm,
} from "./state.js";
import { buildPlotModel, renderSvg } from "./plot.js";
import { PARAM_FIELDS, PrintParams, RangesDoc } from "./types.js";

const DEBOUNCE_MS = 250;

// A sensible wet-concrete starting point, well inside the service ranges.
const DEFAULTS: PrintParams = {
  rho: 2100, mu: 7.5, tau0: 630, phi_n: 25, h_n: 7.5, v_p: 50, u_f: 40.5,
};

const $ = (id: string) => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing #${id}`);
  return el;
};

function readForm(state: SessionState): void {
  for (const field of PARAM_FIELDS) {
    const input = document.getElementById(`in-${field}`) as HTMLInputElement;
    state.form[field] = input.value.trim() === "" ? NaN : Number(input.value);
  }
  const toggle = document.getElementById("in-layers") as HTMLInputElement;
  state.layers = toggle.checked ? 2 : 1;
}

function markIssues(state: SessionState, ranges: RangesDoc | null): boolean {
  const issues = validateForm(state.form, ranges);
  for (const field of PARAM_FIELDS) {
    const input = document.getElementById(`in-${field}`) as HTMLInputElement;
    const issue = issues.find((i) => i.field === field);
    input.classList.toggle("invalid", issue?.kind === "error");
    input.classList.toggle("out-of-range", issue?.kind === "range");
    input.title = issue ? issue.message : "";
  }
  return canSubmit(issues);
}

function renderBadges(state: SessionState, rerender: () => void): void {
  const host = $("badges");
  host.textContent = "";
  for (const badge of badges(state)) {
    const el = document.createElement("span");
    el.className = `badge badge-${badge.kind}`;
    el.textContent = badge.text;
    const x = document.createElement("button");
    x.className = "badge-dismiss";
    x.textContent = "×";
    x.addEventListener("click", () => {
      dismissBadge(state, badge.id);
      rerender();
    });
    el.appendChild(x);
    host.appendChild(el);
  }
}

function renderFeatures(state: SessionState): void {
  const host = $("features");
  host.textContent = "";
  const f = state.last?.features;
  if (!f) {
    host.textContent = state.last ? "features unavailable" : "no prediction yet";
    return;
  }
  const rows: [string, string][] = [
    ["width w", `${f.width.toFixed(2)} mm`],
    ["height h", `${f.height.toFixed(2)} mm`],
    ["area A", `${f.area.toFixed(1)} mm²`],
    ["bed contact", `${f.bed_contact.toFixed(2)} mm`],
  ];
  if (f.contact_length !== null) {
    rows.push(["contact length l_c", `${f.contact_length.toFixed(2)} mm`]);
  }
  for (const [k, v] of rows) {
    const dt = document.createElement("dt");
    dt.textContent = k;
    const dd = document.createElement("dd");
    dd.textContent = v;
    host.append(dt, dd);
  }
}

function renderSnapshots(state: SessionState, rerender: () => void): void {
  const host = $("snapshots");
  host.textContent = "";
  state.snapshots.forEach((snap, i) => {
    const li = document.createElement("li");
    li.textContent = `${snap.label} (${snap.layers}L) `;
    const rm = document.createElement("button");
    rm.textContent = "remove";
    rm.addEventListener("click", () => {
      removeSnapshot(state, i);
      rerender();
    });
    li.appendChild(rm);
    host.appendChild(li);
  });
  const pin = $("pin") as HTMLButtonElement;
  pin.disabled = !state.last || state.snapshots.length >= MAX_SNAPSHOTS;
}

function renderPlot(state: SessionState): void {
  const host = $("plot");
  if (!state.last) {
    host.innerHTML = '<p class="placeholder">enter parameters to predict</p>';
    return;
  }
  const model = buildPlotModel(
    state.last,
    state.snapshots,
    state.lastParams ? state.lastParams.phi_n : null,
  );
  host.innerHTML = renderSvg(model);
}

function setBanner(text: string | null): void {
  const el = $("banner");
  el.textContent = text ?? "";
  el.classList.toggle("hidden", text === null);
}

export function start(): void {
  const base = new URLSearchParams(location.search).get("service")
    ?? `${location.protocol}//${location.host}`;
  const debounced = new URLSearchParams(location.search).get("debounce") !== "0";
  const client = new ServiceClient(base);
  const state = initialState(DEFAULTS);
  let ranges: RangesDoc | null = null;
  let timer: number | undefined;

  const rerender = () => {
    renderPlot(state);
    renderFeatures(state);
    renderBadges(state, rerender);
    renderSnapshots(state, rerender);
  };

  const predictNow = async () => {
    readForm(state);
    if (!markIssues(state, ranges)) return;
    const seq = claimSeq(state);
    const params = { ...state.form };
    try {
      const doc = await client.predict({ params, layers: state.layers });
      if (applyResponse(state, seq, params, doc)) {
        setBanner(null);
        if (doc.format_version !== 1) {
          setBanner(`unexpected response format ${doc.format_version}`);
        }
        rerender();
      }
    } catch (e) {
      if (e instanceof ServiceError && e.kind === "unreachable") {
        // keep the last result on screen, just flag the outage
        setBanner("service unreachable, showing last result");
      } else {
        setBanner(`request failed: ${(e as Error).message}`);
      }
    }
  };

  const schedule = () => {
    if (!debounced) return;
    window.clearTimeout(timer);
    timer = window.setTimeout(predictNow, DEBOUNCE_MS);
  };

  const grid = $("param-grid");
  for (const field of PARAM_FIELDS) {
    const label = document.createElement("label");
    label.htmlFor = `in-${field}`;
    label.textContent = field;
    const input = document.createElement("input");
    input.id = `in-${field}`;
    input.type = "number";
    input.step = "any";
    input.value = String(DEFAULTS[field]);
    input.addEventListener("input", () => {
      readForm(state);
      markIssues(state, ranges);
      schedule();
    });
    const unit = document.createElement("span");
    unit.className = "unit";
    unit.id = `unit-${field}`;
    grid.append(label, input, unit);
  }

  ($("in-layers") as HTMLInputElement).addEventListener("change", () => {
    readForm(state);
    void predictNow();
  });
  ($("predict") as HTMLButtonElement).addEventListener("click", () => {
    void predictNow();
  });
  ($("pin") as HTMLButtonElement).addEventListener("click", () => {
    pinSnapshot(state, `#${state.snapshots.length + 1}`);
    rerender();
  });

  client
    .ranges()
    .then((doc) => {
      ranges = doc;
      for (const field of PARAM_FIELDS) {
        const r = doc.parameters[field];
        if (!r) continue;
        const unit = document.getElementById(`unit-${field}`);
        if (unit) unit.textContent = `${r.lo}–${r.hi} ${r.unit}`;
      }
      readForm(state);
      markIssues(state, ranges);
    })
    .catch(() => setBanner("service unreachable, showing last result"));

  rerender();
  void predictNow();
}

if (typeof document !== "undefined" && document.getElementById("param-grid")) {
  start();
}
