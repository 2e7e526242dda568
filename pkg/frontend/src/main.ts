import { initApp } from "./controller";

// same-origin by default; ?api=http://host:port points the UI at another server
const params = new URLSearchParams(window.location.search);
const apiBase = params.get("api") ?? "";

initApp(document, { apiBase });
