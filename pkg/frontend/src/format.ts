/** Display formatting: rates as one-decimal percentages. */

export function formatPercent(rate: number): string {
  return `${(rate * 100).toFixed(1)}%`;
}

export function formatInterval(lower: number, upper: number): string {
  return `[${formatPercent(lower)}, ${formatPercent(upper)}]`;
}

export function formatCount(n: number): string {
  return n.toLocaleString("en-US");
}
