#!/usr/bin/env node
/**
 * Scorer bridge CLI.
 *
 *   cli.js [serve] --mode lexicon --lexicon lex.json [--transport stdio|tcp --port N]
 *   cli.js [serve] --mode model --model model.json [--max-text-length N]
 *   cli.js train --dataset data.jsonl --out model.json [--lr X --batch-size N
 *                --max-epochs N --seed N]
 */

import { saveModel } from "./classifier";
import { BridgeConfig, serve } from "./server";
import { DEFAULT_TRAIN_CONFIG, readDatasetFile, train } from "./trainer";

interface Flags {
  [key: string]: string;
}

function parseFlags(argv: string[]): { command: string; flags: Flags } {
  let command = "serve";
  let start = 0;
  if (argv.length && !argv[0].startsWith("--")) {
    command = argv[0];
    start = 1;
  }
  const flags: Flags = {};
  for (let i = start; i < argv.length; i += 2) {
    const key = argv[i];
    if (!key.startsWith("--") || i + 1 >= argv.length) {
      throw new Error(`bad arguments near ${key}`);
    }
    flags[key.slice(2)] = argv[i + 1];
  }
  return { command, flags };
}

function intFlag(flags: Flags, name: string, fallback: number): number {
  const raw = flags[name];
  if (raw === undefined) return fallback;
  const value = Number(raw);
  if (!Number.isFinite(value)) throw new Error(`--${name} must be a number, got ${raw}`);
  return value;
}

async function main(): Promise<number> {
  const { command, flags } = parseFlags(process.argv.slice(2));

  if (command === "serve") {
    const mode = flags.mode ?? "lexicon";
    if (mode !== "lexicon" && mode !== "model") {
      throw new Error(`--mode must be lexicon or model, got ${mode}`);
    }
    const transport = flags.transport ?? "stdio";
    if (transport !== "stdio" && transport !== "tcp") {
      throw new Error(`--transport must be stdio or tcp, got ${transport}`);
    }
    const config: BridgeConfig = {
      mode,
      lexiconPath: flags.lexicon,
      modelPath: flags.model,
      maxTextLength: intFlag(flags, "max-text-length", 128),
      transport,
      port: flags.port !== undefined ? intFlag(flags, "port", 0) : undefined,
    };
    await serve(config);
    return 0;
  }

  if (command === "train") {
    if (!flags.dataset || !flags.out) {
      throw new Error("train needs --dataset PATH and --out PATH");
    }
    const config = {
      ...DEFAULT_TRAIN_CONFIG,
      learningRate: flags.lr !== undefined ? Number(flags.lr) : DEFAULT_TRAIN_CONFIG.learningRate,
      batchSize: intFlag(flags, "batch-size", DEFAULT_TRAIN_CONFIG.batchSize),
      maxEpochs: intFlag(flags, "max-epochs", DEFAULT_TRAIN_CONFIG.maxEpochs),
      maxTextLength: intFlag(flags, "max-text-length", DEFAULT_TRAIN_CONFIG.maxTextLength),
      seed: intFlag(flags, "seed", DEFAULT_TRAIN_CONFIG.seed),
    };
    const examples = readDatasetFile(flags.dataset);
    const result = train(examples, config);
    saveModel(flags.out, result.model);
    process.stderr.write(
      `trained on ${result.trainSize} examples, dev accuracy ${result.bestDevAccuracy.toFixed(3)} ` +
        `after ${result.epochsRun} epoch(s); saved to ${flags.out}\n`,
    );
    return 0;
  }

  throw new Error(`unknown command: ${command}`);
}

main()
  .then((code) => process.exit(code))
  .catch((err) => {
    process.stderr.write(`${err instanceof Error ? err.message : String(err)}\n`);
    process.exit(1);
  });
