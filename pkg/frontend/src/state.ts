// Studio state: the server session is the source of truth; everything here
// is either a mirror of the last payload or transient canvas affordances.

import type { Pt } from "./geometry.js";
import type { PivotSpec, SessionPayload, SketchSpec } from "./types.js";

export type CanvasMode = "select" | "place-pivot" | "sketch";

interface CanvasSnapshot {
  pivot: PivotSpec | null;
  sketch: SketchSpec | null;
}

export class StudioState {
  payload: SessionPayload | null = null;
  mode: CanvasMode = "select";
  strokeBuffer: Pt[] = [];
  previewSvg: string | null = null;
  previewProvenance: Record<string, unknown> | null = null;
  private undoStack: CanvasSnapshot[] = [];
  private listeners = new Set<() => void>();

  subscribe(listener: () => void): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) listener();
  }

  setMode(mode: CanvasMode): void {
    if (mode !== this.mode) {
      this.mode = mode;
      this.strokeBuffer = []; // one active tool; stale strokes never leak across modes
      this.emit();
    }
  }

  bufferPoint(p: Pt): void {
    this.strokeBuffer.push(p);
    this.emit();
  }

  clearStroke(): void {
    this.strokeBuffer = [];
    this.emit();
  }

  applyPayload(payload: SessionPayload): void {
    this.payload = payload;
    this.emit();
  }

  invalidatePreview(): void {
    this.previewSvg = null;
    this.previewProvenance = null;
    this.emit();
  }

  setPreview(svg: string, provenance: Record<string, unknown>): void {
    this.previewSvg = svg;
    this.previewProvenance = provenance;
    this.emit();
  }

  /** Snapshot the canvas inputs before a mutation so undo can replay them. */
  pushUndo(): void {
    if (!this.payload) return;
    const { pivot, sketch } = this.payload.session;
    this.undoStack.push({
      pivot: pivot ? structuredClone(pivot) : null,
      sketch: sketch ? structuredClone(sketch) : null,
    });
  }

  popUndo(): CanvasSnapshot | null {
    return this.undoStack.pop() ?? null;
  }

  get canUndo(): boolean {
    return this.undoStack.length > 0;
  }

  get selectionsComplete(): boolean {
    const s = this.payload?.session.selections;
    return Boolean(s && s.layout_id && s.vg_design_id && s.connection_style && s.palette_id);
  }
}
