/**
 * Pair comparison helpers: locate the chunk inside its context window and
 * mark the words that differ between the two chunks, so the annotator's eye
 * lands on the actual conflict.
 */

export interface ContextSegments {
  before: string;
  chunk: string;
  after: string;
}

/** Split a context window around its chunk (whitespace-insensitive match). */
export function splitContext(context: string, chunk: string): ContextSegments {
  const direct = context.indexOf(chunk);
  if (direct >= 0) {
    return {
      before: context.slice(0, direct),
      chunk: context.slice(direct, direct + chunk.length),
      after: context.slice(direct + chunk.length),
    };
  }
  // tolerate whitespace differences between the stored chunk and context
  const pattern = chunk
    .trim()
    .split(/\s+/)
    .map((w) => w.replace(/[.*+?^${}()|[\]\\]/g, "\\$&"))
    .join("\\s+");
  if (pattern) {
    const match = new RegExp(pattern).exec(context);
    if (match) {
      return {
        before: context.slice(0, match.index),
        chunk: match[0],
        after: context.slice(match.index + match[0].length),
      };
    }
  }
  return { before: "", chunk: context, after: "" };
}

export interface DiffWord {
  text: string;
  changed: boolean;
}

/**
 * Word-level difference of two chunks via a longest-common-subsequence
 * alignment; words outside the LCS are marked changed.
 */
export function diffWords(a: string, b: string): [DiffWord[], DiffWord[]] {
  const wa = a.split(/\s+/).filter(Boolean);
  const wb = b.split(/\s+/).filter(Boolean);
  const n = wa.length;
  const m = wb.length;
  const lcs: number[][] = Array.from({ length: n + 1 }, () => new Array(m + 1).fill(0));
  for (let i = n - 1; i >= 0; i--) {
    for (let j = m - 1; j >= 0; j--) {
      lcs[i][j] =
        wa[i] === wb[j] ? lcs[i + 1][j + 1] + 1 : Math.max(lcs[i + 1][j], lcs[i][j + 1]);
    }
  }
  const keepA = new Array(n).fill(false);
  const keepB = new Array(m).fill(false);
  let i = 0;
  let j = 0;
  while (i < n && j < m) {
    if (wa[i] === wb[j]) {
      keepA[i] = true;
      keepB[j] = true;
      i += 1;
      j += 1;
    } else if (lcs[i + 1][j] >= lcs[i][j + 1]) {
      i += 1;
    } else {
      j += 1;
    }
  }
  return [
    wa.map((text, idx) => ({ text, changed: !keepA[idx] })),
    wb.map((text, idx) => ({ text, changed: !keepB[idx] })),
  ];
}
