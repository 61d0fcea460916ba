import * as tf from "@tensorflow/tfjs";
import { execFileSync } from "child_process";
import { mkdtempSync, readFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";
import { describe, expect, it } from "vitest";

import {
  AGREEMENT_TOL,
  checkAgreement,
  exportModel,
  loadModelArtifacts,
  modelToDoc,
  saveModelArtifacts,
} from "../src/exportModel.js";
import { evalMlp } from "../src/mlpEval.js";
import { UnsupportedLayerError } from "../src/schema.js";

function denseModel(activation: "tanh" | "sigmoid" | "linear"): tf.Sequential {
  const model = tf.sequential();
  model.add(tf.layers.dense({ inputShape: [2], units: 5, activation }));
  model.add(tf.layers.dense({ units: 1, activation: "linear" }));
  return model;
}

function tmp(): string {
  return mkdtempSync(join(tmpdir(), "exporter-"));
}

describe("export-model", () => {
  it("round-trips a tanh/identity model within 1e-6", async () => {
    const dir = tmp();
    const source = join(dir, "model.artifacts.json");
    const out = join(dir, "model.json");
    await saveModelArtifacts(denseModel("tanh"), source);
    const { doc, worstDisagreement } = await exportModel(source, out);
    expect(worstDisagreement).toBeLessThanOrEqual(AGREEMENT_TOL);
    expect(doc.n_inputs).toBe(2);
    expect(doc.layers).toHaveLength(2);
    expect(doc.layers[0].activation).toBe("tanh");
    expect(doc.layers[1].activation).toBe("identity");
    const written = JSON.parse(readFileSync(out, "utf-8"));
    expect(written.layers[0].weights[0]).toHaveLength(2);
  });

  it("supports sigmoid hidden layers", async () => {
    const model = denseModel("sigmoid");
    const doc = modelToDoc(model);
    expect(doc.layers[0].activation).toBe("sigmoid");
    expect(checkAgreement(model, doc)).toBeLessThanOrEqual(AGREEMENT_TOL);
  });

  it("exports identity-only models with verbatim weights", async () => {
    const model = tf.sequential();
    model.add(tf.layers.dense({ inputShape: [2], units: 2, activation: "linear" }));
    model.setWeights([
      tf.tensor2d([[1, 3], [2, 4]]), // kernel [in, out]
      tf.tensor1d([0.5, -0.5]),
    ]);
    const doc = modelToDoc(model);
    // row i of the schema holds the incoming weights of neuron i
    expect(doc.layers[0].weights).toEqual([[1, 2], [3, 4]]);
    expect(doc.layers[0].bias).toEqual([0.5, -0.5]);
    expect(evalMlp(doc, [1, 1])).toEqual([3.5, 6.5]);
  });

  it("rejects unsupported activations naming the layer", () => {
    const model = tf.sequential();
    model.add(tf.layers.dense({ inputShape: [2], units: 3, activation: "relu" }));
    expect(() => modelToDoc(model)).toThrowError(UnsupportedLayerError);
    expect(() => modelToDoc(model)).toThrowError(/relu/);
  });

  it("rejects non-dense layers naming the class", () => {
    const model = tf.sequential();
    model.add(tf.layers.flatten({ inputShape: [2, 2] }));
    model.add(tf.layers.dense({ units: 1 }));
    expect(() => modelToDoc(model)).toThrowError(/Flatten/);
  });

  it("artifacts file reloads into an equivalent tfjs model", async () => {
    const dir = tmp();
    const source = join(dir, "model.artifacts.json");
    const model = denseModel("tanh");
    await saveModelArtifacts(model, source);
    const reloaded = await loadModelArtifacts(source);
    const probe = tf.tensor2d([[0.3, -1.2]]);
    const a = (model.predict(probe) as tf.Tensor).arraySync() as number[][];
    const b = (reloaded.predict(probe) as tf.Tensor).arraySync() as number[][];
    expect(Math.abs(a[0][0] - b[0][0])).toBeLessThanOrEqual(1e-12);
  });

  it("exported file loads in the optimization engine with zero schema errors", async () => {
    const dir = tmp();
    const source = join(dir, "model.artifacts.json");
    const out = join(dir, "model.json");
    await saveModelArtifacts(denseModel("tanh"), source);
    await exportModel(source, out);
    const script = [
      "import sys",
      "from nngo.mlp import mlp_load",
      `m = mlp_load(${JSON.stringify(out)})`,
      "print('loaded', m.n_inputs, len(m.layers))",
    ].join("\n");
    const result = execFileSync("python3", ["-c", script], { encoding: "utf-8" });
    expect(result).toContain("loaded 2 2");
  });

  it("cross-language agreement: engine evaluation matches the source model", async () => {
    const dir = tmp();
    const source = join(dir, "model.artifacts.json");
    const out = join(dir, "model.json");
    const model = denseModel("tanh");
    await saveModelArtifacts(model, source);
    await exportModel(source, out);
    const probe = [[0.25, -0.75], [1.5, 2.0], [-3.0, 0.0]];
    const batch = tf.tensor2d(probe);
    const want = (model.predict(batch) as tf.Tensor).arraySync() as number[][];
    const script = [
      "import json",
      "from nngo.mlp import mlp_load",
      `m = mlp_load(${JSON.stringify(out)})`,
      `print(json.dumps(m.eval_batch(${JSON.stringify(probe)}).tolist()))`,
    ].join("\n");
    const got = JSON.parse(
      execFileSync("python3", ["-c", script], { encoding: "utf-8" }),
    ) as number[][];
    for (let i = 0; i < probe.length; i += 1) {
      expect(Math.abs(got[i][0] - want[i][0])).toBeLessThanOrEqual(1e-6);
    }
  });
});
