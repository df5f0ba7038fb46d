import { CatalogClient } from "./api.js";
import { ExplorerApp } from "./app.js";

const root = document.querySelector<HTMLElement>("#app");
if (!root) throw new Error("missing #app mount point");

// Same-origin by default: the catalog service serves this bundle itself.
const app = new ExplorerApp(root, new CatalogClient(""), true);
void app.start(window.location.search);
