/**
 * Character vocabularies for the translator.
 *
 * The decoder's start/end symbols are tab and newline: the corpus TSV format
 * cannot contain either inside a sentence, so they never collide with real
 * text.  A vertical-tab padding symbol fills batches out to fixed length.
 */

export const START = '\t';
export const END = '\n';
export const PAD = '\v';

export interface CharVocab {
  sourceChars: string[];
  targetChars: string[];
  sourceIndex: Map<string, number>;
  targetIndex: Map<string, number>;
}

function indexOf(chars: string[]): Map<string, number> {
  return new Map(chars.map((c, i) => [c, i]));
}

/** Build source/target charsets from parallel pairs, sorted by code point. */
export function buildVocab(pairs: Array<[string, string]>): CharVocab {
  if (pairs.length === 0) {
    throw new Error('cannot build a vocabulary from an empty corpus');
  }
  const reserved = [START, END, PAD];
  for (const [source, target] of pairs) {
    for (const symbol of reserved) {
      if (source.includes(symbol) || target.includes(symbol)) {
        throw new Error(
          `corpus text contains the reserved symbol ${JSON.stringify(symbol)}`,
        );
      }
    }
  }
  const sourceSet = new Set<string>([PAD]);
  const targetSet = new Set<string>([PAD, START, END]);
  for (const [source, target] of pairs) {
    for (const ch of source) sourceSet.add(ch);
    for (const ch of target) targetSet.add(ch);
  }
  const sourceChars = [...sourceSet].sort();
  const targetChars = [...targetSet].sort();
  return {
    sourceChars,
    targetChars,
    sourceIndex: indexOf(sourceChars),
    targetIndex: indexOf(targetChars),
  };
}
