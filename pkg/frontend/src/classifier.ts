/**
 * Bag-of-words logistic classifier used by model mode.
 *
 * The artifact is a plain JSON file with the vocabulary and weights so a
 * trained model round-trips through disk and loads straight into serve().
 */

import { readFileSync, writeFileSync } from "node:fs";
import { tokenize } from "./tokenize";

export interface ModelArtifact {
  format: "dmwl-bridge-model";
  version: 1;
  vocabulary: string[];
  weights: number[];
  bias: number;
  maxTextLength: number;
}

export class BagOfWordsClassifier {
  readonly vocabulary: Map<string, number>;
  weights: number[];
  bias: number;
  maxTextLength: number;

  constructor(vocabulary: string[], maxTextLength = 128) {
    this.vocabulary = new Map(vocabulary.map((w, i) => [w, i]));
    this.weights = new Array(vocabulary.length).fill(0);
    this.bias = 0;
    this.maxTextLength = maxTextLength;
  }

  features(text: string): Map<number, number> {
    const counts = new Map<number, number>();
    const tokens = tokenize(text).slice(0, this.maxTextLength);
    for (const token of tokens) {
      const index = this.vocabulary.get(token.toLowerCase());
      if (index !== undefined) {
        counts.set(index, (counts.get(index) ?? 0) + 1);
      }
    }
    return counts;
  }

  /** Probability of the positive class. */
  predictProba(text: string): number {
    let z = this.bias;
    for (const [index, count] of this.features(text)) {
      z += this.weights[index] * count;
    }
    return 1 / (1 + Math.exp(-z));
  }

  toArtifact(): ModelArtifact {
    const vocabulary = new Array<string>(this.vocabulary.size);
    for (const [word, index] of this.vocabulary) vocabulary[index] = word;
    return {
      format: "dmwl-bridge-model",
      version: 1,
      vocabulary,
      weights: [...this.weights],
      bias: this.bias,
      maxTextLength: this.maxTextLength,
    };
  }

  static fromArtifact(artifact: ModelArtifact): BagOfWordsClassifier {
    if (artifact.format !== "dmwl-bridge-model" || artifact.version !== 1) {
      throw new Error("not a bridge model artifact");
    }
    const model = new BagOfWordsClassifier(artifact.vocabulary, artifact.maxTextLength);
    model.weights = [...artifact.weights];
    model.bias = artifact.bias;
    return model;
  }
}

export function saveModel(path: string, model: BagOfWordsClassifier): void {
  writeFileSync(path, JSON.stringify(model.toArtifact()) + "\n", "utf-8");
}

export function loadModel(path: string): BagOfWordsClassifier {
  return BagOfWordsClassifier.fromArtifact(JSON.parse(readFileSync(path, "utf-8")));
}
