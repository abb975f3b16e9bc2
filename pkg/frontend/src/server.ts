/**
 * Line-protocol scorer server over stdio or TCP.
 *
 * Single-threaded request loop: each request line yields exactly one
 * response line with a matching id, scores in input order. Protocol
 * problems become error responses, never crashes.
 */

import * as net from "node:net";
import * as readline from "node:readline";
import { Readable, Writable } from "node:stream";
import { loadModel } from "./classifier";
import { Lexicon, lexiconScore, loadLexicon } from "./lexicon";
import { errorResponse, parseRequest, serializeResponse } from "./protocol";
import { truncateTokens } from "./tokenize";

export interface BridgeConfig {
  mode: "lexicon" | "model";
  lexiconPath?: string;
  modelPath?: string;
  maxTextLength: number;
  transport: "stdio" | "tcp";
  port?: number;
}

export type Scorer = (text: string) => number;

export function buildScorer(config: BridgeConfig): Scorer {
  if (config.mode === "lexicon") {
    if (!config.lexiconPath) throw new Error("lexicon mode needs --lexicon PATH");
    const lexicon: Lexicon = loadLexicon(config.lexiconPath);
    // parity mode: no truncation, the core formula verbatim
    return (text) => lexiconScore(text, lexicon);
  }
  if (!config.modelPath) throw new Error("model mode needs --model PATH");
  const model = loadModel(config.modelPath);
  const limit = config.maxTextLength;
  return (text) => model.predictProba(truncateTokens(text, limit));
}

export function handleLine(line: string, scorer: Scorer): string {
  if (!line.trim()) return "";
  const request = parseRequest(line);
  if (request === null) {
    return errorResponse(0, "parse");
  }
  try {
    const scores = request.texts.map((text) => {
      const score = scorer(text);
      return Math.min(1, Math.max(0, score));
    });
    return serializeResponse({ id: request.id, scores });
  } catch (err) {
    return errorResponse(request.id, `scoring failed: ${String(err)}`);
  }
}

export function serveStreams(input: Readable, output: Writable, scorer: Scorer): Promise<void> {
  return new Promise((resolve) => {
    const lines = readline.createInterface({ input, crlfDelay: Infinity });
    lines.on("line", (line) => {
      const response = handleLine(line, scorer);
      if (response) output.write(response + "\n");
    });
    lines.on("close", () => resolve());
  });
}

export function serveTcp(port: number, scorer: Scorer): net.Server {
  const server = net.createServer((socket) => {
    const lines = readline.createInterface({ input: socket, crlfDelay: Infinity });
    lines.on("line", (line) => {
      const response = handleLine(line, scorer);
      if (response) socket.write(response + "\n");
    });
    socket.on("error", () => socket.destroy());
  });
  server.listen(port);
  return server;
}

export async function serve(config: BridgeConfig): Promise<void> {
  const scorer = buildScorer(config);
  if (config.transport === "tcp") {
    const server = serveTcp(config.port ?? 0, scorer);
    await new Promise<void>((resolve) => {
      server.on("listening", () => {
        const address = server.address();
        if (address && typeof address === "object") {
          process.stderr.write(`listening on tcp://127.0.0.1:${address.port}\n`);
        }
      });
      server.on("close", resolve);
    });
    return;
  }
  await serveStreams(process.stdin, process.stdout, scorer);
}
