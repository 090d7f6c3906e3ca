// Orchestration between the state mirror and the service. DOM-free so the
// whole studio loop is testable against a live backend.

import { ApiClient } from "./api.js";
import type { Pt } from "./geometry.js";
import { StudioState } from "./state.js";
import type { Selections, SessionPayload } from "./types.js";

export class StudioController {
  constructor(
    public api: ApiClient,
    public state: StudioState,
  ) {}

  private get sessionId(): string {
    const payload = this.state.payload;
    if (!payload) throw new Error("no session yet");
    return payload.session.id;
  }

  async start(
    markdown: string,
    canvas: { width_px: number; height_px: number; background?: string },
    options: { alpha?: number; seed?: number } = {},
  ): Promise<SessionPayload> {
    const payload = await this.api.createSession(markdown, canvas, options);
    this.state.applyPayload(payload);
    return payload;
  }

  /** Debounced by the caller; server-side parse feedback lands in payload.issues. */
  async editMarkdown(markdown: string): Promise<SessionPayload> {
    const payload = await this.api.patchSession(this.sessionId, { markdown });
    this.state.applyPayload(payload);
    this.state.invalidatePreview();
    return payload;
  }

  async placePivot(bbox: [number, number, number, number], svg?: string): Promise<SessionPayload> {
    this.state.pushUndo();
    const payload = await this.api.patchSession(this.sessionId, {
      pivot: { bbox, svg: svg ?? null },
    });
    this.state.applyPayload(payload);
    this.state.invalidatePreview();
    return payload;
  }

  async removePivot(): Promise<SessionPayload> {
    this.state.pushUndo();
    const payload = await this.api.patchSession(this.sessionId, { pivot: null });
    this.state.applyPayload(payload);
    this.state.invalidatePreview();
    return payload;
  }

  /** Raw pointer samples in session canvas pixels; geometry stays server-side. */
  async sketchFlow(points: Pt[]): Promise<SessionPayload> {
    this.state.pushUndo();
    const payload = await this.api.patchSession(this.sessionId, {
      sketch: { points, space: "canvas-px" },
    });
    this.state.applyPayload(payload);
    this.state.clearStroke();
    this.state.invalidatePreview();
    return payload;
  }

  async clearSketch(): Promise<SessionPayload> {
    this.state.pushUndo();
    const payload = await this.api.patchSession(this.sessionId, { sketch: null });
    this.state.applyPayload(payload);
    this.state.invalidatePreview();
    return payload;
  }

  async select(selections: Partial<Selections>): Promise<SessionPayload> {
    const payload = await this.api.patchSession(this.sessionId, { selections });
    this.state.applyPayload(payload);
    this.state.invalidatePreview();
    return payload;
  }

  /** Undo replays the previous canvas inputs through a PATCH, so the local
   * mirror and the server session move together. */
  async undoCanvas(): Promise<SessionPayload | null> {
    const snapshot = this.state.popUndo();
    if (!snapshot) return null;
    const payload = await this.api.patchSession(this.sessionId, {
      pivot: snapshot.pivot,
      sketch: snapshot.sketch,
    });
    this.state.applyPayload(payload);
    this.state.invalidatePreview();
    return payload;
  }

  /** Preview bytes come from the server assemble endpoint, never local math. */
  async refreshPreview(): Promise<string> {
    const result = await this.api.assemble(this.sessionId);
    this.state.setPreview(result.svg, result.provenance);
    return result.svg;
  }

  /** Export hands back exactly the previewed bytes. */
  exportSvg(): { filename: string; content: string } {
    if (this.state.previewSvg === null) throw new Error("nothing previewed yet");
    const layout = (this.state.previewProvenance?.layout_id as string | undefined) ?? "infographic";
    return { filename: `${layout}.svg`, content: this.state.previewSvg };
  }
}
