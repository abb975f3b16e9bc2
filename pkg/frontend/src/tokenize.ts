/**
 * Tokenizer matching the pipeline core: whitespace split with leading and
 * trailing punctuation detached as separate tokens; interior punctuation
 * (apostrophes, hyphens, anything else mid-chunk) stays put.
 */

const PUNCT = new Set("!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~".split(""));

export function tokenize(text: string): string[] {
  const tokens: string[] = [];
  for (let chunk of text.split(/\s+/)) {
    if (!chunk) continue;
    const lead: string[] = [];
    const tail: string[] = [];
    while (chunk && PUNCT.has(chunk[0])) {
      lead.push(chunk[0]);
      chunk = chunk.slice(1);
    }
    while (chunk && PUNCT.has(chunk[chunk.length - 1])) {
      tail.push(chunk[chunk.length - 1]);
      chunk = chunk.slice(0, -1);
    }
    tokens.push(...lead);
    if (chunk) tokens.push(chunk);
    tokens.push(...tail.reverse());
  }
  return tokens;
}

export function truncateTokens(text: string, maxTokens: number): string {
  const tokens = tokenize(text);
  if (tokens.length <= maxTokens) return text;
  return tokens.slice(0, maxTokens).join(" ");
}
