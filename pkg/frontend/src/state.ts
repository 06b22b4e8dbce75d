// Pure session-state logic, kept free of DOM and fetch so it can be
// unit-tested in node.

import {
  PARAM_FIELDS,
  ParamField,
  PredictResponse,
  PrintParams,
  RangesDoc,
} from "./types.js";

export interface FieldIssue {
  field: ParamField;
  // "error" blocks the request entirely, "range" is a soft highlight:
  // the value is outside the documented bounds but still sent.
  kind: "error" | "range";
  message: string;
}

export interface Snapshot {
  label: string;
  layers: number;
  params: PrintParams;
  points: [number, number][];
}

export const MAX_SNAPSHOTS = 4;

export interface SessionState {
  form: PrintParams;
  layers: 1 | 2;
  last: PredictResponse | null;
  lastParams: PrintParams | null;
  snapshots: Snapshot[];
  dismissed: string[];
  // request bookkeeping for stale-response discard
  nextSeq: number;
  appliedSeq: number;
}

export function initialState(form: PrintParams): SessionState {
  return {
    form: { ...form },
    layers: 1,
    last: null,
    lastParams: null,
    snapshots: [],
    dismissed: [],
    nextSeq: 1,
    appliedSeq: 0,
  };
}

export function validateForm(form: PrintParams, ranges: RangesDoc | null): FieldIssue[] {
  const issues: FieldIssue[] = [];
  for (const field of PARAM_FIELDS) {
    const v = form[field];
    if (!Number.isFinite(v)) {
      issues.push({ field, kind: "error", message: `${field} is not a number` });
      continue;
    }
    if (v <= 0) {
      issues.push({ field, kind: "error", message: `${field} must be positive` });
      continue;
    }
    const r = ranges?.parameters[field];
    if (r && (v < r.lo || v > r.hi)) {
      issues.push({
        field,
        kind: "range",
        message: `${field}=${v} outside [${r.lo}, ${r.hi}] ${r.unit}`,
      });
    }
  }
  return issues;
}

export function canSubmit(issues: FieldIssue[]): boolean {
  return issues.every((i) => i.kind !== "error");
}

/** Claim a sequence number for an outgoing request. */
export function claimSeq(state: SessionState): number {
  return state.nextSeq++;
}

/**
 * Install a response if it is newer than the last applied one.
 * Returns true when applied, false when discarded as stale.
 */
export function applyResponse(
  state: SessionState,
  seq: number,
  params: PrintParams,
  response: PredictResponse,
): boolean {
  if (seq <= state.appliedSeq) return false;
  state.appliedSeq = seq;
  state.last = response;
  state.lastParams = { ...params };
  state.dismissed = [];
  return true;
}

/** Pin the current result for overlay comparison. No-op when full or empty. */
export function pinSnapshot(state: SessionState, label: string): Snapshot | null {
  if (!state.last || !state.lastParams) return null;
  if (state.snapshots.length >= MAX_SNAPSHOTS) return null;
  const snap: Snapshot = Object.freeze({
    label,
    layers: state.last.model_info.layers,
    params: Object.freeze({ ...state.lastParams }) as PrintParams,
    points: state.last.points.map((p) => [p[0], p[1]] as [number, number]),
  });
  state.snapshots = [...state.snapshots, snap];
  return snap;
}

export function removeSnapshot(state: SessionState, index: number): void {
  state.snapshots = state.snapshots.filter((_, i) => i !== index);
}

export type BadgeKind = "range" | "extrapolation" | "printability" | "info";

export interface Badge {
  id: string;
  kind: BadgeKind;
  text: string;
}

function badgeKind(warning: string): BadgeKind {
  if (warning.startsWith("range:")) return "range";
  if (warning.startsWith("extrapolation:")) return "extrapolation";
  if (warning.startsWith("printability:")) return "printability";
  return "info";
}

/** Badge models for the current response, minus the dismissed ones. */
export function badges(state: SessionState): Badge[] {
  if (!state.last) return [];
  return state.last.warnings
    .filter((w) => !state.dismissed.includes(w))
    .map((w) => ({ id: w, kind: badgeKind(w), text: w }));
}

export function dismissBadge(state: SessionState, id: string): void {
  if (!state.dismissed.includes(id)) state.dismissed = [...state.dismissed, id];
}
