/**
 * Display formatting of API-provided numbers. Presentation only: every value
 * passed in originates from a service response.
 */

export function fmt(value: number, digits: number): string {
  return value.toFixed(digits);
}

/** Decimal risk difference rendered in percentage points. */
export function fmtPercentPoints(value: number, digits = 1): string {
  return (value * 100).toFixed(digits);
}

export function fmtInt(value: number): string {
  return String(Math.trunc(value));
}

/** Full-precision rendering, for tooltips and exports. */
export function fmtExact(value: number): string {
  return String(value);
}
