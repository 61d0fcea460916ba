/** Plain forward evaluation of an exported weight document.
 *
 * Used only for the round-trip agreement check against the source model;
 * the optimization engine has its own evaluator behind the same schema.
 */

import { MlpDoc } from "./schema.js";

export function evalMlp(doc: MlpDoc, input: number[]): number[] {
  if (input.length !== doc.n_inputs) {
    throw new Error(`expected ${doc.n_inputs} inputs, got ${input.length}`);
  }
  let z = input.slice();
  if (doc.input_scale) {
    z = z.map((v, i) => doc.input_scale!.a[i] * v + doc.input_scale!.b[i]);
  }
  for (const layer of doc.layers) {
    const pre = layer.weights.map(
      (row, i) => row.reduce((acc, w, j) => acc + w * z[j], layer.bias[i]),
    );
    if (layer.activation === "tanh") {
      z = pre.map(Math.tanh);
    } else if (layer.activation === "sigmoid") {
      z = pre.map((v) => 1 / (1 + Math.exp(-v)));
    } else {
      z = pre;
    }
  }
  if (doc.output_scale) {
    z = z.map((v, i) => doc.output_scale!.a[i] * v + doc.output_scale!.b[i]);
  }
  return z;
}
