// DOM wiring: content editor on the left, canvas in the middle,
// recommendations and preview on the right.

import { ApiClient } from "./api.js";
import { CanvasPane } from "./canvas.js";
import { StudioController } from "./controller.js";
import { Panels } from "./panels.js";
import { StudioState } from "./state.js";
import type { CanvasMode } from "./state.js";

const DEFAULT_MD = `# Morning Routine
- title: Wake up
  text: Rise with the sun and stretch a little.
- title: Hydrate
  text: A full glass of water before anything else.
- title: Move
  text: Twenty minutes of light exercise.
- title: Plan
  text: Write down what matters today.
`;

const API_BASE =
  new URLSearchParams(location.search).get("api") ?? "http://127.0.0.1:8765";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

async function boot(): Promise<void> {
  const api = new ApiClient(API_BASE);
  const state = new StudioState();
  const controller = new StudioController(api, state);

  const editor = el<HTMLTextAreaElement>("editor");
  const issues = el<HTMLUListElement>("issues");
  const status = el<HTMLSpanElement>("status");
  const preview = el<HTMLDivElement>("preview");
  editor.value = DEFAULT_MD;

  new Panels(el("panels"), controller);
  const canvasPane = new CanvasPane(el<HTMLCanvasElement>("studio-canvas"), controller);

  state.subscribe(() => {
    const payload = state.payload;
    issues.textContent = "";
    for (const issue of payload?.issues ?? []) {
      const li = document.createElement("li");
      li.className = issue.severity;
      li.textContent = issue.item_index !== null ? `item ${issue.item_index}: ${issue.message}` : issue.message;
      issues.appendChild(li);
    }
    el<HTMLButtonElement>("btn-preview").disabled = !state.selectionsComplete;
    el<HTMLButtonElement>("btn-export").disabled = state.previewSvg === null;
    el<HTMLButtonElement>("btn-undo").disabled = !state.canUndo;
    if (state.previewSvg !== null) {
      preview.innerHTML = state.previewSvg.replace(/^<\?xml[^>]*\?>\s*/, "");
    }
  });

  // content -> canvas -> exploration, left to right
  let debounce: ReturnType<typeof setTimeout> | null = null;
  editor.addEventListener("input", () => {
    if (debounce) clearTimeout(debounce);
    debounce = setTimeout(() => {
      void controller
        .editMarkdown(editor.value)
        .then(() => (status.textContent = "synced"))
        .catch((err) => {
          status.textContent = String(err.message ?? err);
          const li = document.createElement("li");
          li.className = "error";
          li.textContent = String(err.message ?? err);
          issues.textContent = "";
          issues.appendChild(li);
        });
    }, 400);
  });

  for (const mode of ["select", "place-pivot", "sketch"] as CanvasMode[]) {
    el<HTMLButtonElement>(`mode-${mode}`).addEventListener("click", () => {
      state.setMode(mode);
      document.querySelectorAll(".mode").forEach((b) => b.classList.remove("active"));
      el(`mode-${mode}`).classList.add("active");
    });
  }
  el<HTMLButtonElement>("btn-clear-pivot").addEventListener("click", () => void controller.removePivot());
  el<HTMLButtonElement>("btn-clear-sketch").addEventListener("click", () => void controller.clearSketch());
  el<HTMLButtonElement>("btn-undo").addEventListener("click", () => void controller.undoCanvas());

  el<HTMLButtonElement>("btn-preview").addEventListener("click", () => {
    status.textContent = "assembling";
    void controller
      .refreshPreview()
      .then(() => (status.textContent = "preview ready"))
      .catch((err) => (status.textContent = String(err.message ?? err)));
  });

  el<HTMLButtonElement>("btn-export").addEventListener("click", () => {
    const file = controller.exportSvg();
    const blob = new Blob([file.content], { type: "image/svg+xml" });
    const a = document.createElement("a");
    a.href = URL.createObjectURL(blob);
    a.download = file.filename;
    a.click();
    URL.revokeObjectURL(a.href);
  });

  status.textContent = "starting session";
  try {
    await controller.start(DEFAULT_MD, { width_px: 1200, height_px: 1600 });
    status.textContent = "ready";
  } catch (err) {
    status.textContent = `cannot reach ${API_BASE}: ${String(err)}`;
  }
  await canvasPane.render();
}

void boot();
