// Payload shapes of the recommendation service (JSON over HTTP).

export interface CanvasSpec {
  width_px: number;
  height_px: number;
  background: string;
}

export interface LayoutEntry {
  layout_id: string;
  e_o: number;
  e_c: number;
  e_u_raw: number;
  uniformity: number;
  mean_distance: number;
  vg_count: number;
  e_l: number;
  truncated: boolean;
  distance?: number;
}

export interface VgEntry {
  design_id: string;
  score: number;
}

export interface ConnectionEntry {
  style: string;
  score: number;
}

export interface Bundle {
  layouts: LayoutEntry[];
  sketch_used: boolean;
  gated_out: string[];
  vgs: {
    entries: VgEntry[];
    cluster_id: number;
    relaxed: boolean;
  } | null;
  connections: {
    entries: ConnectionEntry[];
    sampled_designs: string[];
  } | null;
  palettes: string[];
}

export interface Selections {
  layout_id: string | null;
  vg_design_id: string | null;
  connection_style: string | null;
  connection_design_id: string | null;
  palette_id: string | null;
}

export interface PivotSpec {
  bbox: [number, number, number, number];
  svg?: string | null;
  graphic_ref?: string | null;
}

export interface SketchSpec {
  points: [number, number][];
  space: "canvas-px" | "normalized";
}

export interface Session {
  id: string;
  markdown: string;
  canvas: CanvasSpec;
  alpha: number;
  seed: number;
  pivot: PivotSpec | null;
  sketch: SketchSpec | null;
  selections: Selections;
  created_at: string;
  updated_at: string;
}

export interface Issue {
  severity: "error" | "warning";
  item_index: number | null;
  message: string;
}

export interface SessionPayload {
  session: Session;
  issues: Issue[];
  bundle: Bundle;
}

export interface SessionPatch {
  markdown?: string;
  canvas?: CanvasSpec;
  pivot?: PivotSpec | null;
  sketch?: SketchSpec | null;
  alpha?: number;
  seed?: number;
  selections?: Partial<Selections>;
}

export interface AssembleResult {
  svg: string;
  provenance: Record<string, unknown>;
}
