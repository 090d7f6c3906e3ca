// Recommendation panels: ranked lists per stage; clicking an entry patches
// the session selection and the downstream panels refresh from the new
// bundle.

import { StudioController } from "./controller.js";
import type { Bundle, Selections } from "./types.js";

function entryButton(
  label: string,
  selected: boolean,
  onClick: () => void,
  extra?: string,
): HTMLButtonElement {
  const btn = document.createElement("button");
  btn.className = "entry" + (selected ? " selected" : "");
  btn.textContent = label;
  if (extra) {
    const badge = document.createElement("span");
    badge.className = "badge";
    badge.textContent = extra;
    btn.appendChild(badge);
  }
  btn.addEventListener("click", onClick);
  return btn;
}

export class Panels {
  constructor(
    private root: HTMLElement,
    private controller: StudioController,
  ) {
    controller.state.subscribe(() => this.render());
  }

  private section(title: string): HTMLElement {
    const box = document.createElement("section");
    const h = document.createElement("h3");
    h.textContent = title;
    box.appendChild(h);
    this.root.appendChild(box);
    return box;
  }

  render(): void {
    const payload = this.controller.state.payload;
    this.root.textContent = "";
    if (!payload) return;
    const bundle: Bundle = payload.bundle;
    const selections: Selections = payload.session.selections;
    const pick = (sel: Partial<Selections>) => void this.controller.select(sel);

    const layoutBox = this.section(bundle.sketch_used ? "Layouts (sketch matches)" : "Layouts (energy ranked)");
    for (const entry of bundle.layouts) {
      const badge =
        entry.distance !== undefined ? `d ${entry.distance.toFixed(3)}` : `E ${entry.e_l.toFixed(3)}`;
      layoutBox.appendChild(
        entryButton(
          entry.layout_id,
          selections.layout_id === entry.layout_id,
          () => pick({ layout_id: entry.layout_id }),
          badge,
        ),
      );
    }
    if (bundle.gated_out.length > 0) {
      const note = document.createElement("p");
      note.className = "muted";
      note.textContent = `${bundle.gated_out.length} match(es) overlap the pivot and were set aside`;
      layoutBox.appendChild(note);
    }

    const vgBox = this.section("Group designs");
    for (const entry of bundle.vgs?.entries ?? []) {
      const btn = entryButton(
        entry.design_id,
        selections.vg_design_id === entry.design_id,
        () => pick({ vg_design_id: entry.design_id }),
        entry.score.toFixed(3),
      );
      const img = document.createElement("img");
      img.src = this.controller.api.assetUrl(`vgs/${entry.design_id}.svg`);
      img.alt = entry.design_id;
      btn.prepend(img);
      vgBox.appendChild(btn);
    }
    if (bundle.vgs?.relaxed) {
      const note = document.createElement("p");
      note.className = "muted";
      note.textContent = "no cluster members fit this content; showing slot-compatible designs";
      vgBox.appendChild(note);
    }

    const connBox = this.section("Connections");
    for (const entry of bundle.connections?.entries ?? []) {
      connBox.appendChild(
        entryButton(
          entry.style,
          selections.connection_style === entry.style,
          () => pick({ connection_style: entry.style }),
          entry.score.toFixed(3),
        ),
      );
    }
    const designsRow = document.createElement("div");
    designsRow.className = "designs";
    for (const designId of bundle.connections?.sampled_designs ?? []) {
      const btn = entryButton(designId, selections.connection_design_id === designId, () =>
        pick({ connection_design_id: designId }),
      );
      const img = document.createElement("img");
      img.src = this.controller.api.assetUrl(`connections/${designId}.svg`);
      img.alt = designId;
      btn.prepend(img);
      designsRow.appendChild(btn);
    }
    connBox.appendChild(designsRow);

    const paletteBox = this.section("Palettes");
    for (const paletteId of bundle.palettes) {
      paletteBox.appendChild(
        entryButton(paletteId, selections.palette_id === paletteId, () => pick({ palette_id: paletteId })),
      );
    }
  }
}
