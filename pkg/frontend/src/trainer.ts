/**
 * Fine-tuning stub: trains the bag-of-words classifier on a dataset file in
 * the pipeline's standard format (header line + one example per line).
 *
 * Defaults record the published training recipe: learning rate 5e-5,
 * batch size 32, Adam with beta1 0.9 / beta2 0.999 / epsilon 1e-6, early
 * stopping on dev accuracy with at most 4 epochs. Training quality is
 * explicitly out of scope; the contract is a loadable artifact.
 */

import { readFileSync } from "node:fs";
import { BagOfWordsClassifier } from "./classifier";
import { tokenize } from "./tokenize";

export interface TrainConfig {
  learningRate: number;
  batchSize: number;
  beta1: number;
  beta2: number;
  epsilon: number;
  maxEpochs: number;
  maxTextLength: number;
  seed: number;
}

export const DEFAULT_TRAIN_CONFIG: TrainConfig = {
  learningRate: 5e-5,
  batchSize: 32,
  beta1: 0.9,
  beta2: 0.999,
  epsilon: 1e-6,
  maxEpochs: 4,
  maxTextLength: 128,
  seed: 0,
};

export interface LabeledText {
  text: string;
  label: 0 | 1; // 1 = positive
  sentId: string;
}

export function readDatasetFile(path: string): LabeledText[] {
  const lines = readFileSync(path, "utf-8").split("\n");
  if (!lines.length || !lines[0].trim()) {
    throw new Error("dataset file is empty (missing header line)");
  }
  const header = JSON.parse(lines[0]);
  if (header.format !== "dmwl-dataset" || header.version !== 1) {
    throw new Error("not a dmwl dataset file");
  }
  const examples: LabeledText[] = [];
  for (let i = 1; i < lines.length; i++) {
    if (!lines[i].trim()) continue;
    const row = JSON.parse(lines[i]);
    if (row.label !== "positive" && row.label !== "negative") {
      throw new Error(`line ${i + 1}: bad label ${JSON.stringify(row.label)}`);
    }
    examples.push({ text: row.text, label: row.label === "positive" ? 1 : 0, sentId: row.sent_id });
  }
  return examples;
}

/** Deterministic PRNG (mulberry32) so splits and batches are reproducible. */
function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

function shuffled<T>(items: T[], rand: () => number): T[] {
  const out = [...items];
  for (let i = out.length - 1; i > 0; i--) {
    const j = Math.floor(rand() * (i + 1));
    [out[i], out[j]] = [out[j], out[i]];
  }
  return out;
}

export interface TrainResult {
  model: BagOfWordsClassifier;
  epochsRun: number;
  bestDevAccuracy: number;
  trainSize: number;
  devSize: number;
}

export function train(examples: LabeledText[], config: TrainConfig = DEFAULT_TRAIN_CONFIG): TrainResult {
  if (examples.length === 0) {
    throw new Error("refusing to train: dataset is empty");
  }
  const labels = new Set(examples.map((e) => e.label));
  if (labels.size < 2) {
    throw new Error("refusing to train: dataset has only one class");
  }

  const rand = mulberry32(config.seed);
  const ordered = shuffled(
    [...examples].sort((a, b) => (a.sentId < b.sentId ? -1 : a.sentId > b.sentId ? 1 : 0)),
    rand,
  );
  const nTrain = Math.floor(0.8 * ordered.length);
  const nDev = Math.floor(0.1 * ordered.length);
  const trainSet = ordered.slice(0, nTrain);
  // with tiny datasets the dev slice can be empty; fall back to train
  const devSet = nDev > 0 ? ordered.slice(nTrain, nTrain + nDev) : trainSet;

  const vocabulary = new Set<string>();
  for (const example of trainSet) {
    for (const token of tokenize(example.text).slice(0, config.maxTextLength)) {
      vocabulary.add(token.toLowerCase());
    }
  }
  const model = new BagOfWordsClassifier([...vocabulary].sort(), config.maxTextLength);

  const dim = model.weights.length;
  const m = new Array(dim + 1).fill(0); // Adam first moment, bias last
  const v = new Array(dim + 1).fill(0); // Adam second moment
  let step = 0;

  const accuracy = (set: LabeledText[]) =>
    set.length === 0
      ? 0
      : set.filter((e) => (model.predictProba(e.text) > 0.5 ? 1 : 0) === e.label).length / set.length;

  let bestDev = accuracy(devSet);
  let bestWeights = [...model.weights];
  let bestBias = model.bias;
  let epochsRun = 0;

  for (let epoch = 0; epoch < config.maxEpochs; epoch++) {
    const order = shuffled(trainSet, rand);
    for (let start = 0; start < order.length; start += config.batchSize) {
      const batch = order.slice(start, start + config.batchSize);
      const grad = new Map<number, number>();
      let gradBias = 0;
      for (const example of batch) {
        const error = model.predictProba(example.text) - example.label;
        for (const [index, count] of model.features(example.text)) {
          grad.set(index, (grad.get(index) ?? 0) + (error * count) / batch.length);
        }
        gradBias += error / batch.length;
      }
      step += 1;
      const correction1 = 1 - Math.pow(config.beta1, step);
      const correction2 = 1 - Math.pow(config.beta2, step);
      const update = (index: number, g: number) => {
        m[index] = config.beta1 * m[index] + (1 - config.beta1) * g;
        v[index] = config.beta2 * v[index] + (1 - config.beta2) * g * g;
        const mHat = m[index] / correction1;
        const vHat = v[index] / correction2;
        return (config.learningRate * mHat) / (Math.sqrt(vHat) + config.epsilon);
      };
      for (const [index, g] of grad) {
        model.weights[index] -= update(index, g);
      }
      model.bias -= update(dim, gradBias);
    }
    epochsRun = epoch + 1;
    const devAccuracy = accuracy(devSet);
    if (devAccuracy > bestDev) {
      bestDev = devAccuracy;
      bestWeights = [...model.weights];
      bestBias = model.bias;
    } else if (epoch > 0) {
      break; // early stopping: dev accuracy stopped improving
    }
  }

  model.weights = bestWeights;
  model.bias = bestBias;
  return {
    model,
    epochsRun,
    bestDevAccuracy: bestDev,
    trainSize: trainSet.length,
    devSize: devSet.length,
  };
}
