// Canvas pane: renders the session's layout dots, pivot box, and live
// stroke; captures pointer gestures for pivot placement and flow sketching.

import { resamplePoints, type Pt } from "./geometry.js";
import { StudioController } from "./controller.js";
import type { LayoutEntry } from "./types.js";

interface LayoutPoints {
  points: [number, number][];
}

export class CanvasPane {
  private ctx: CanvasRenderingContext2D;
  private dragStart: Pt | null = null;
  private dragCurrent: Pt | null = null;
  private drawing = false;
  private layoutPointsCache = new Map<string, [number, number][]>();

  constructor(
    private el: HTMLCanvasElement,
    private controller: StudioController,
  ) {
    this.ctx = el.getContext("2d")!;
    el.addEventListener("pointerdown", (e) => this.onDown(e));
    el.addEventListener("pointermove", (e) => this.onMove(e));
    el.addEventListener("pointerup", (e) => void this.onUp(e));
    controller.state.subscribe(() => void this.render());
  }

  private get session() {
    return this.controller.state.payload?.session ?? null;
  }

  /** Display pixels -> session canvas pixels. */
  private toSessionPx(e: PointerEvent): Pt {
    const rect = this.el.getBoundingClientRect();
    const session = this.session;
    const w = session?.canvas.width_px ?? this.el.width;
    const h = session?.canvas.height_px ?? this.el.height;
    return [((e.clientX - rect.left) / rect.width) * w, ((e.clientY - rect.top) / rect.height) * h];
  }

  private onDown(e: PointerEvent) {
    const mode = this.controller.state.mode;
    if (mode === "select") return;
    this.el.setPointerCapture(e.pointerId);
    const p = this.toSessionPx(e);
    if (mode === "place-pivot") {
      this.dragStart = p;
      this.dragCurrent = p;
    } else {
      this.drawing = true;
      this.controller.state.clearStroke();
      this.controller.state.bufferPoint(p);
    }
  }

  private onMove(e: PointerEvent) {
    const mode = this.controller.state.mode;
    if (mode === "place-pivot" && this.dragStart) {
      this.dragCurrent = this.toSessionPx(e);
      void this.render();
    } else if (mode === "sketch" && this.drawing) {
      this.controller.state.bufferPoint(this.toSessionPx(e));
    }
  }

  private async onUp(e: PointerEvent) {
    const mode = this.controller.state.mode;
    const session = this.session;
    if (!session) return;
    if (mode === "place-pivot" && this.dragStart) {
      const [x0, y0] = this.dragStart;
      const [x1, y1] = this.toSessionPx(e);
      this.dragStart = null;
      this.dragCurrent = null;
      const { width_px, height_px } = session.canvas;
      const bbox: [number, number, number, number] = [
        Math.max(0, Math.min(x0, x1) / width_px),
        Math.max(0, Math.min(y0, y1) / height_px),
        Math.abs(x1 - x0) / width_px,
        Math.abs(y1 - y0) / height_px,
      ];
      if (bbox[2] > 0.01 && bbox[3] > 0.01) {
        const upload = (document.getElementById("pivot-svg") as HTMLTextAreaElement | null)?.value.trim();
        await this.controller.placePivot(bbox, upload || undefined);
      }
    } else if (mode === "sketch" && this.drawing) {
      this.drawing = false;
      const stroke = [...this.controller.state.strokeBuffer];
      if (stroke.length >= 2) {
        await this.controller.sketchFlow(stroke);
      }
    }
  }

  private async layoutPoints(layoutId: string): Promise<[number, number][]> {
    const cached = this.layoutPointsCache.get(layoutId);
    if (cached) return cached;
    const data = await this.controller.api.getAssetJson<LayoutPoints>(`layouts/${layoutId}.json`);
    this.layoutPointsCache.set(layoutId, data.points);
    return data.points;
  }

  async render(): Promise<void> {
    const state = this.controller.state;
    const session = this.session;
    const ctx = this.ctx;
    const { width, height } = this.el;
    ctx.clearRect(0, 0, width, height);
    if (!session) return;
    const sx = width / session.canvas.width_px;
    const sy = height / session.canvas.height_px;

    ctx.fillStyle = session.canvas.background;
    ctx.fillRect(0, 0, width, height);
    ctx.strokeStyle = "#c5cbd3";
    ctx.strokeRect(0.5, 0.5, width - 1, height - 1);

    // selected (or top-ranked) layout vertices
    const layouts = state.payload?.bundle.layouts ?? [];
    const shownId = session.selections.layout_id ?? layouts[0]?.layout_id;
    if (shownId) {
      try {
        const pts = await this.layoutPoints(shownId);
        ctx.fillStyle = "#3a6ea5";
        pts.forEach(([x, y], i) => {
          ctx.beginPath();
          ctx.arc(x * width, y * height, 7, 0, Math.PI * 2);
          ctx.fill();
          ctx.fillText(String(i + 1), x * width + 9, y * height - 9);
        });
      } catch {
        // layout asset not reachable; dots are cosmetic
      }
    }

    // pivot box
    if (session.pivot) {
      const [bx, by, bw, bh] = session.pivot.bbox;
      ctx.strokeStyle = "#b0413e";
      ctx.lineWidth = 2;
      ctx.strokeRect(bx * width, by * height, bw * width, bh * height);
      ctx.lineWidth = 1;
    }
    if (this.dragStart && this.dragCurrent) {
      const [x0, y0] = this.dragStart;
      const [x1, y1] = this.dragCurrent;
      ctx.strokeStyle = "#b0413e";
      ctx.setLineDash([6, 4]);
      ctx.strokeRect(x0 * sx, y0 * sy, (x1 - x0) * sx, (y1 - y0) * sy);
      ctx.setLineDash([]);
    }

    // saved sketch, live stroke, and ghost dots at the resampled positions
    const sketch = session.sketch?.points ?? [];
    const live = state.strokeBuffer;
    for (const [strokePts, color] of [
      [sketch, "#7a8694"],
      [live, "#2d7d5a"],
    ] as const) {
      if (strokePts.length >= 2) {
        ctx.strokeStyle = color;
        ctx.beginPath();
        ctx.moveTo(strokePts[0][0] * sx, strokePts[0][1] * sy);
        for (const [x, y] of strokePts.slice(1)) ctx.lineTo(x * sx, y * sy);
        ctx.stroke();
      }
    }
    const ghostSource = live.length >= 2 ? live : sketch;
    const n = state.payload?.bundle.layouts[0]?.vg_count;
    if (ghostSource.length >= 2 && n && n >= 2) {
      ctx.fillStyle = "rgba(45,125,90,0.45)";
      for (const [x, y] of resamplePoints(ghostSource as Pt[], n)) {
        ctx.beginPath();
        ctx.arc(x * sx, y * sy, 9, 0, Math.PI * 2);
        ctx.fill();
      }
    }
  }
}

export function layoutScoreLabel(entry: LayoutEntry): string {
  const score = entry.distance !== undefined ? `d=${entry.distance.toFixed(3)}` : `E=${entry.e_l.toFixed(3)}`;
  return `${entry.layout_id} (${score})`;
}
