/**
 * API base URL resolution for the static bundle.
 *
 * Priority: `?api=` query parameter, then a `<meta name="api-base">` tag,
 * then same-origin relative requests. The bundle itself is static; this is
 * its only piece of deployment configuration.
 */

export function resolveApiBase(
  search: string,
  readMeta: (name: string) => string | null,
): string {
  const fromQuery = new URLSearchParams(search).get("api");
  if (fromQuery !== null && fromQuery.trim() !== "") {
    return fromQuery.trim();
  }
  const fromMeta = readMeta("api-base");
  if (fromMeta !== null && fromMeta.trim() !== "") {
    return fromMeta.trim();
  }
  return "";
}

/** Debounce interval for slider-driven recomputation requests. */
export const DEBOUNCE_MS = 150;
