import { ApiClient } from "./api.js";
import { initApp } from "./app.js";

// served from the same origin as the api, so no base url needed
const root = document.getElementById("app");
if (root) initApp(root, new ApiClient(""));
