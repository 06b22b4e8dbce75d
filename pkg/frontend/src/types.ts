// Wire types for the beadshape HTTP service. These mirror the JSON the
// service emits; the UI never derives numbers of its own from them.

export const PARAM_FIELDS = [
  "rho", "mu", "tau0", "phi_n", "h_n", "v_p", "u_f",
] as const;

export type ParamField = (typeof PARAM_FIELDS)[number];

export type PrintParams = Record<ParamField, number>;

export interface RangeEntry {
  lo: number;
  hi: number;
  unit: string;
}

export interface RangesDoc {
  parameters: Record<string, RangeEntry>;
  inputs: Record<string, RangeEntry>;
}

export interface HealthDoc {
  status: string;
  models: Record<string, {
    layers: number;
    n_harmonics: number;
    best_epoch: number;
    best_validation_error: number;
  }>;
}

export interface FourierDoc {
  n_harmonics: number;
  c0: number;
  s: number[];
  c: number[];
}

export interface FeatureDoc {
  width: number;
  height: number;
  area: number;
  bed_contact: number;
  contact_length: number | null;
  pinch: [number, number] | null;
  notes: string[];
}

export interface ModelInfo {
  layers: number;
  version: number;
  best_validation_error: number;
}

export interface PredictResponse {
  format_version: number;
  fourier: FourierDoc;
  points: [number, number][];
  features: FeatureDoc | null;
  warnings: string[];
  model_info: ModelInfo;
}

export interface PredictRequest {
  params: PrintParams;
  layers: 1 | 2;
  n_points?: number;
  mode?: "warn" | "strict";
}
