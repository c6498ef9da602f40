#!/usr/bin/env node
/** Command-line front end mirroring ExportConfig, one flag per field. */

import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { METHOD_NAMES, type MethodName } from "./attribution.js";
import { SPLITS, type SplitName } from "./data.js";
import { ConfigError, exportCorpus } from "./export.js";

function parseMethods(text: string): MethodName[] {
  if (text === "all") return [...METHOD_NAMES];
  return text
    .split(",")
    .map((m) => m.trim())
    .filter((m) => m.length > 0) as MethodName[]; // names checked by checkConfig
}

export async function main(argv: string[]): Promise<number> {
  const args = await yargs(argv)
    .scriptName("attribution-export")
    .usage("$0 --output corpus.jsonl [options]\n\nScores a dataset split with a deterministic classifier and writes one attribution record per instance.")
    .option("model", { type: "string", default: "tiny-review-v1", describe: "model identifier (names a fixed weight draw)" })
    .option("split", { type: "string", choices: SPLITS, default: "test" as SplitName, describe: "dataset split to export" })
    .option("methods", { type: "string", default: "all", describe: `comma-separated methods, or "all" (${METHOD_NAMES.join(", ")})` })
    .option("output", { type: "string", demandOption: true, describe: "corpus output path (.jsonl)" })
    .option("seed", { type: "number", default: 0, describe: "seed for the stochastic methods; recorded in metadata" })
    .option("max-instances", { type: "number", describe: "export at most this many instances" })
    .strict()
    .help()
    .parse();

  try {
    const result = exportCorpus(
      {
        modelId: args.model,
        split: args.split as SplitName,
        methods: parseMethods(args.methods),
        outputPath: args.output,
        seed: args.seed,
        maxInstances: args.maxInstances,
      },
      (line) => console.error(line),
    );
    console.log(`wrote ${result.written} records to ${result.outputPath}`);
    console.log(`metadata: ${result.metadataPath}`);
    if (result.skipped.length > 0) {
      console.log(`skipped ${result.skipped.length} instance(s), see metadata for reasons`);
    }
    return 0;
  } catch (err) {
    if (err instanceof ConfigError) {
      console.error(`error: ${err.message}`);
      return 1;
    }
    console.error(`export failed: ${err instanceof Error ? err.message : String(err)}`);
    return 2;
  }
}

const entry = process.argv[1] ?? "";
if (entry.endsWith("cli.js") || entry.endsWith("attribution-export")) {
  main(hideBin(process.argv)).then((code) => {
    process.exitCode = code;
  });
}
