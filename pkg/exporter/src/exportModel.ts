/** Extract a dense feed-forward TensorFlow.js model into the engine's schema.
 *
 * The source file is a single JSON holding the model artifacts as produced
 * by `model.save(tf.io.withSaveHandler(...))`: the topology, the weight
 * specs, and the raw weight buffer in base64. After conversion the source
 * and the exported document are evaluated on random inputs and must agree
 * to 1e-6; a disagreement aborts the export.
 */

import * as tf from "@tensorflow/tfjs";
import { promises as fs } from "fs";

import { evalMlp } from "./mlpEval.js";
import {
  Activation,
  LayerDoc,
  MlpDoc,
  SUPPORTED_ACTIVATIONS,
  UnsupportedLayerError,
} from "./schema.js";

export interface ArtifactsFile {
  modelTopology: object;
  weightSpecs: tf.io.WeightsManifestEntry[];
  weightData: string; // base64
}

export const AGREEMENT_TOL = 1e-6;
const CHECK_POINTS = 100;

export async function saveModelArtifacts(
  model: tf.LayersModel,
  path: string,
): Promise<void> {
  let captured: tf.io.ModelArtifacts | undefined;
  await model.save(
    tf.io.withSaveHandler(async (artifacts) => {
      captured = artifacts;
      return { modelArtifactsInfo: { dateSaved: new Date(), modelTopologyType: "JSON" } };
    }),
  );
  if (!captured || !captured.weightData) {
    throw new Error("model produced no artifacts");
  }
  const doc: ArtifactsFile = {
    modelTopology: captured.modelTopology as object,
    weightSpecs: captured.weightSpecs ?? [],
    weightData: Buffer.from(captured.weightData as ArrayBuffer).toString("base64"),
  };
  await fs.writeFile(path, JSON.stringify(doc), "utf-8");
}

export async function loadModelArtifacts(path: string): Promise<tf.LayersModel> {
  const raw = JSON.parse(await fs.readFile(path, "utf-8")) as ArtifactsFile;
  const weightData = Buffer.from(raw.weightData, "base64");
  return tf.loadLayersModel(
    tf.io.fromMemory({
      modelTopology: raw.modelTopology,
      weightSpecs: raw.weightSpecs,
      weightData: weightData.buffer.slice(
        weightData.byteOffset,
        weightData.byteOffset + weightData.byteLength,
      ),
    }),
  );
}

function activationOf(layer: tf.layers.Layer): Activation {
  const config = layer.getConfig() as { activation?: unknown };
  const name = String(config.activation ?? "linear");
  if (!SUPPORTED_ACTIVATIONS.has(name)) {
    throw new UnsupportedLayerError(layer.name, `activation ${name}`);
  }
  return name === "linear" ? "identity" : (name as Activation);
}

export function modelToDoc(model: tf.LayersModel): MlpDoc {
  const layers: LayerDoc[] = [];
  let nInputs: number | undefined;
  for (const layer of model.layers) {
    if (layer.getClassName() === "InputLayer") {
      continue;
    }
    if (layer.getClassName() !== "Dense") {
      throw new UnsupportedLayerError(layer.name, `class ${layer.getClassName()}`);
    }
    const config = layer.getConfig() as { useBias?: boolean };
    const weights = layer.getWeights();
    const kernel = weights[0]; // shape [in, out]
    const [fanIn, fanOut] = kernel.shape as [number, number];
    nInputs = nInputs ?? fanIn;
    const kernelData = kernel.arraySync() as number[][];
    const rows: number[][] = [];
    for (let o = 0; o < fanOut; o += 1) {
      rows.push(kernelData.map((inputRow) => inputRow[o]));
    }
    const bias =
      config.useBias === false || weights.length < 2
        ? new Array<number>(fanOut).fill(0)
        : (weights[1].arraySync() as number[]);
    layers.push({ weights: rows, bias, activation: activationOf(layer) });
  }
  if (!layers.length || nInputs === undefined) {
    throw new UnsupportedLayerError(model.name, "no dense layers found");
  }
  return { n_inputs: nInputs, layers };
}

/** Seeded uniform generator (mulberry32): deterministic check points. */
export function mulberry32(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function checkAgreement(
  model: tf.LayersModel,
  doc: MlpDoc,
  points: number = CHECK_POINTS,
  seed: number = 12345,
): number {
  const rand = mulberry32(seed);
  const inputs: number[][] = [];
  for (let k = 0; k < points; k += 1) {
    inputs.push(Array.from({ length: doc.n_inputs }, () => rand() * 6 - 3));
  }
  const batch = tf.tensor2d(inputs);
  const predicted = model.predict(batch) as tf.Tensor;
  const reference = predicted.arraySync() as number[][];
  batch.dispose();
  predicted.dispose();
  let worst = 0;
  for (let k = 0; k < points; k += 1) {
    const mine = evalMlp(doc, inputs[k]);
    for (let o = 0; o < mine.length; o += 1) {
      worst = Math.max(worst, Math.abs(mine[o] - reference[k][o]));
    }
  }
  return worst;
}

export async function exportModel(
  sourcePath: string,
  outPath: string,
): Promise<{ doc: MlpDoc; worstDisagreement: number }> {
  const model = await loadModelArtifacts(sourcePath);
  const doc = modelToDoc(model);
  const worst = checkAgreement(model, doc);
  if (worst > AGREEMENT_TOL) {
    throw new Error(
      `exported model disagrees with source by ${worst} (tolerance ${AGREEMENT_TOL})`,
    );
  }
  await fs.writeFile(outPath, JSON.stringify(doc, null, 1) + "\n", "utf-8");
  return { doc, worstDisagreement: worst };
}
