/** Command line: export-model and gen-peaks-csv.
 *
 *   node dist/cli.js export-model --source model.artifacts.json --out model.json
 *   node dist/cli.js gen-peaks-csv --n 500 --seed 1 --out data.csv
 */

import { exportModel } from "./exportModel.js";
import { genPeaksCsv } from "./peaks.js";

function parseFlags(argv: string[]): Map<string, string> {
  const flags = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    const value = argv[i + 1];
    if (!key.startsWith("--") || value === undefined) {
      throw new Error(`malformed arguments near ${key}`);
    }
    flags.set(key.slice(2), value);
  }
  return flags;
}

function requireFlag(flags: Map<string, string>, name: string): string {
  const value = flags.get(name);
  if (value === undefined) {
    throw new Error(`missing required flag --${name}`);
  }
  return value;
}

async function main(): Promise<number> {
  const [command, ...rest] = process.argv.slice(2);
  try {
    if (command === "export-model") {
      const flags = parseFlags(rest);
      const source = requireFlag(flags, "source");
      const out = requireFlag(flags, "out");
      const { doc, worstDisagreement } = await exportModel(source, out);
      console.log(
        `wrote ${out}: ${doc.layers.length} layers, ` +
          `worst disagreement ${worstDisagreement.toExponential(2)}`,
      );
      return 0;
    }
    if (command === "gen-peaks-csv") {
      const flags = parseFlags(rest);
      const n = Number(flags.get("n") ?? "500");
      const seed = Number(flags.get("seed") ?? "0");
      const out = requireFlag(flags, "out");
      if (!Number.isInteger(n) || n < 1) {
        throw new Error(`--n must be a positive integer, got ${flags.get("n")}`);
      }
      await genPeaksCsv(n, seed, out);
      console.log(`wrote ${out}: ${n} rows`);
      return 0;
    }
    console.error("usage: cli.js export-model|gen-peaks-csv [flags]");
    return 2;
  } catch (err) {
    console.error(String(err));
    return 1;
  }
}

main().then((code) => {
  process.exitCode = code;
});
