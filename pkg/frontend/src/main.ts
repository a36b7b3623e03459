import { ApiClient } from "./api.js";
import { App } from "./app.js";

declare global {
  interface Window {
    TREENAV_API_BASE?: string;
  }
}

const base = window.TREENAV_API_BASE ?? "";
const root = document.getElementById("app");
if (!root) throw new Error("missing #app mount point");

const app = new App(root, new ApiClient(base));
app.start();
