/**
 * The five experiment schemas.  Headers must match column for column;
 * a renamed or reordered column is refused with a positional diff
 * rather than silently remapped.
 */

export const SCHEMAS: Record<string, readonly string[]> = {
  "line-figure2": ["y_over_x", "rho", "mean", "se", "n", "thm1_bound"],
  "onemax-figure3": ["sigma", "rho", "worst_mean", "se", "n", "robustness_floor"],
  "ski-figure5": ["sigma", "rho", "worst_mean", "se", "n", "robustness_bound"],
  "ski-figure6": ["Q", "rho", "mean", "se", "n"],
  "ski-corollary-figure1": ["Q", "lambda_star", "corollary_bound", "prior_bound"],
};

export const KINDS = Object.keys(SCHEMAS);

/** Returns null on an exact match, otherwise a multi-line diff. */
export function headerDiff(kind: string, header: string[]): string | null {
  const expected = SCHEMAS[kind];
  if (expected === undefined) {
    throw new Error(`unknown experiment kind: ${kind}`);
  }
  if (
    header.length === expected.length &&
    expected.every((name, i) => header[i] === name)
  ) {
    return null;
  }
  const lines = [
    `schema mismatch for ${kind}:`,
    `  expected: ${expected.join(",")}`,
    `  received: ${header.join(",")}`,
  ];
  const width = Math.max(expected.length, header.length);
  for (let i = 0; i < width; i += 1) {
    const want = expected[i];
    const got = header[i];
    if (want === got) {
      continue;
    }
    if (want === undefined) {
      lines.push(`  column ${i + 1}: unexpected "${got}"`);
    } else if (got === undefined) {
      lines.push(`  column ${i + 1}: missing "${want}"`);
    } else {
      lines.push(`  column ${i + 1}: expected "${want}", received "${got}"`);
    }
  }
  return lines.join("\n");
}
