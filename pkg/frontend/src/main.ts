/**
 * Bootstrap: resolve the API base URL, create the client and store, mount
 * the UI, and run the first evaluation.
 */

import { ApiClient } from "./api.js";
import { resolveApiBase } from "./config.js";
import { Store } from "./store.js";
import { UIController } from "./ui.js";

function readMeta(name: string): string | null {
  const node = document.querySelector(`meta[name="${name}"]`);
  return node ? node.getAttribute("content") : null;
}

const base = resolveApiBase(window.location.search, readMeta);
const api = new ApiClient(base);
const store = new Store(api);

const root = document.getElementById("app");
if (!root) {
  throw new Error("missing #app mount point");
}
new UIController(root, store);
void store.refreshNow();
