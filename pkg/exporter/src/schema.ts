/** Weight-file schema of the optimization engine (normative copy lives there). */

export type Activation = "tanh" | "sigmoid" | "identity";

export interface LayerDoc {
  /** Row i holds the incoming weights of neuron i. */
  weights: number[][];
  bias: number[];
  activation: Activation;
}

export interface AffineScaleDoc {
  a: number[];
  b: number[];
}

export interface MlpDoc {
  n_inputs: number;
  layers: LayerDoc[];
  input_scale?: AffineScaleDoc;
  output_scale?: AffineScaleDoc;
}

export const SUPPORTED_ACTIVATIONS: ReadonlySet<string> = new Set([
  "tanh",
  "sigmoid",
  "linear",
]);

export class UnsupportedLayerError extends Error {
  constructor(layerName: string, detail: string) {
    super(`unsupported layer ${layerName}: ${detail}`);
    this.name = "UnsupportedLayerError";
  }
}
