/** Corpus export: dataset split -> attribution records on disk.
 *
 * One JSONL line per instance in the downstream corpus format, plus a
 * metadata sidecar (`<output>.meta.json`) recording the model id,
 * seed, method list and the word-level aggregation rule. Instances
 * whose words cannot be aligned to pieces are skipped and logged;
 * instances without rationales are written without a human field.
 */

import fs from "node:fs";
import path from "node:path";

import { explainWords, isMethodName, METHOD_NAMES, type MethodName } from "./attribution.js";
import { isSplitName, loadSplit, type SplitName } from "./data.js";
import { LABELS, TinyClassifier } from "./model.js";
import { AlignmentError } from "./tokenizer.js";
import { validateRecord, type CorpusRecord } from "./validate.js";

export interface ExportConfig {
  modelId: string;
  split: SplitName;
  methods: MethodName[];
  outputPath: string;
  seed: number;
  maxInstances?: number;
}

export interface SkippedInstance {
  id: string;
  reason: string;
}

export interface ExportResult {
  written: number;
  skipped: SkippedInstance[];
  outputPath: string;
  metadataPath: string;
}

export class ConfigError extends Error {}

export function checkConfig(config: ExportConfig): void {
  if (config.methods.length === 0) throw new ConfigError("method list must not be empty");
  const seen = new Set<string>();
  for (const method of config.methods) {
    if (!isMethodName(method)) {
      throw new ConfigError(`unknown method '${method}' (known: ${METHOD_NAMES.join(", ")})`);
    }
    if (seen.has(method)) throw new ConfigError(`method '${method}' listed twice`);
    seen.add(method);
  }
  if (!isSplitName(config.split)) throw new ConfigError(`unknown split '${config.split}'`);
  if (!Number.isInteger(config.seed) || config.seed < 0) {
    throw new ConfigError("seed must be a non-negative integer");
  }
  if (config.maxInstances !== undefined && (!Number.isInteger(config.maxInstances) || config.maxInstances < 1)) {
    throw new ConfigError("max instances must be a positive integer");
  }
  if (config.outputPath.length === 0) throw new ConfigError("output path must not be empty");
}

/**
 * Computes the records for a config without touching the filesystem.
 * Every returned record has already passed strict validation.
 */
export function buildRecords(
  config: ExportConfig,
  log: (line: string) => void = () => {},
): { records: CorpusRecord[]; skipped: SkippedInstance[] } {
  checkConfig(config);
  const model = new TinyClassifier(config.modelId);
  const instances = loadSplit(config.split).slice(0, config.maxInstances);
  const records: CorpusRecord[] = [];
  const skipped: SkippedInstance[] = [];
  for (const instance of instances) {
    let scores: Record<string, number[]>;
    let predicted: number;
    try {
      // the seed only drives the stochastic surrogate masks; keyed per
      // instance so corpora from different seeds stay aligned
      const explanation = explainWords(model, instance.words, config.methods, `${config.seed}:${instance.id}:lime`);
      scores = explanation.scores;
      predicted = explanation.predicted;
    } catch (err) {
      if (err instanceof AlignmentError) {
        skipped.push({ id: instance.id, reason: err.message });
        log(`skipping ${instance.id}: ${err.message}`);
        continue;
      }
      throw err;
    }
    const record: CorpusRecord = {
      id: instance.id,
      tokens: instance.words,
      attributions: scores,
    };
    if (instance.rationales !== undefined) record.human = instance.rationales;
    record.gold_label = instance.label;
    record.predicted_label = LABELS[predicted];
    validateRecord(record);
    records.push(record);
  }
  return { records, skipped };
}

export function metadataPathFor(outputPath: string): string {
  const ext = path.extname(outputPath);
  const base = ext === ".jsonl" ? outputPath.slice(0, -ext.length) : outputPath;
  return `${base}.meta.json`;
}

/** Runs the export and writes the corpus plus its metadata sidecar. */
export function exportCorpus(config: ExportConfig, log: (line: string) => void = () => {}): ExportResult {
  const { records, skipped } = buildRecords(config, log);
  const lines = records.map((r) => JSON.stringify(r)).join("\n");
  fs.mkdirSync(path.dirname(path.resolve(config.outputPath)), { recursive: true });
  fs.writeFileSync(config.outputPath, lines.length > 0 ? `${lines}\n` : "");

  const metadataPath = metadataPathFor(config.outputPath);
  const metadata = {
    model: config.modelId,
    split: config.split,
    methods: config.methods,
    seed: config.seed,
    max_instances: config.maxInstances ?? null,
    written: records.length,
    skipped,
    aggregation: "word-piece scores are summed to word level before export",
    punctuation_zeroing: true,
  };
  fs.writeFileSync(metadataPath, `${JSON.stringify(metadata, null, 2)}\n`);
  return { written: records.length, skipped, outputPath: config.outputPath, metadataPath };
}
