/**
 * Wire protocol: one JSON object per line in each direction.
 *
 * Request:  {"id": uint, "texts": [string, ...]}
 * Response: {"id": uint, "scores": [number, ...]}  (same id, same order)
 *       or  {"id": uint, "error": string}          (id 0 if unparseable)
 */

export interface ScoreRequest {
  id: number;
  texts: string[];
}

export interface ScoreResponse {
  id: number;
  scores?: number[];
  error?: string;
}

export function parseRequest(line: string): ScoreRequest | null {
  let value: unknown;
  try {
    value = JSON.parse(line);
  } catch {
    return null;
  }
  if (typeof value !== "object" || value === null || Array.isArray(value)) {
    return null;
  }
  const obj = value as Record<string, unknown>;
  if (typeof obj.id !== "number" || !Number.isInteger(obj.id) || obj.id < 0) {
    return null;
  }
  if (!Array.isArray(obj.texts) || obj.texts.some((t) => typeof t !== "string")) {
    return null;
  }
  return { id: obj.id, texts: obj.texts as string[] };
}

export function serializeResponse(response: ScoreResponse): string {
  if (response.error !== undefined) {
    return JSON.stringify({ id: response.id, error: response.error });
  }
  return JSON.stringify({ id: response.id, scores: response.scores ?? [] });
}

export function errorResponse(id: number, message: string): string {
  return serializeResponse({ id, error: message });
}
