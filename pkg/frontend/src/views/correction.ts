/** View B: the correction loop.
 *
 * Panel 1 picks a person and image; panel 2 toggles labels (detected by
 * confidence, alternatives alphabetical) plus the difficult flag and
 * suggestion chips; panel 3 shows the frame in Original/Annotated mode;
 * panel 4 is the live table of saved records, updated in place on save.
 * One mutation in flight at a time: Save is disabled while posting.
 */

import { ApiClient, ImageDetail, RecordView } from "../api.js";
import { clear, el, saveFile, svg } from "../dom.js";
import { PendingEdit, draftFrom, isDirty } from "../state.js";
import { THEME } from "../theme.js";

export class CorrectionPanel {
  /** bytes of the most recent export, kept for equality checks */
  lastExport: Uint8Array | null = null;

  private detail: ImageDetail | null = null;
  private edit: PendingEdit | null = null;
  private annotated = true;
  private saving = false;
  private records = new Map<string, RecordView & { person: string }>();

  private personSelect: HTMLSelectElement;
  private imageSelect: HTMLSelectElement;
  private labelsBox: HTMLElement;
  private frameBox: HTMLElement;
  private tableBox: HTMLElement;
  private conflictBox: HTMLElement;
  private statusBox: HTMLElement;
  private saveButton: HTMLButtonElement;
  private difficultCheck: HTMLInputElement;

  constructor(
    private api: ApiClient,
    private root: HTMLElement,
    private onMutated: () => void,
  ) {
    this.personSelect = el("select", { class: "person-select" });
    this.imageSelect = el("select", { class: "image-select" });
    this.labelsBox = el("div", { class: "label-panel" });
    this.frameBox = el("div", { class: "frame-panel" });
    this.tableBox = el("div", { class: "record-table" });
    this.conflictBox = el("div", { class: "conflict hidden" });
    this.statusBox = el("div", { class: "status" });
    this.saveButton = el("button", { class: "save-button" }, "Save");
    this.difficultCheck = el("input", { type: "checkbox", class: "difficult-check" });

    this.personSelect.addEventListener("change", () => void this.loadImagesForPerson());
    this.imageSelect.addEventListener("change", () => void this.open(this.imageSelect.value));
    this.saveButton.addEventListener("click", () => void this.save());
    this.difficultCheck.addEventListener("change", () => {
      if (this.edit) {
        this.edit.draftDifficult = this.difficultCheck.checked;
        this.renderDirty();
      }
    });

    const exportButton = el("button", { class: "export-button" }, "Export CSV");
    exportButton.addEventListener("click", () => void this.exportCsv());

    const modeToggle = el("button", { class: "mode-toggle" }, "Annotated");
    modeToggle.addEventListener("click", () => {
      this.annotated = !this.annotated;
      modeToggle.textContent = this.annotated ? "Annotated" : "Original";
      this.renderFrame();
    });

    this.root.append(
      el("h2", {}, "B. Misclassification correction"),
      el(
        "div",
        { class: "picker-row" },
        el("label", {}, "Person ", this.personSelect),
        el("label", {}, "Image ", this.imageSelect),
        modeToggle,
        this.saveButton,
        el("label", { class: "difficult-label" }, this.difficultCheck, " Difficult"),
        exportButton,
      ),
      this.conflictBox,
      this.statusBox,
      el("div", { class: "correction-body" }, this.labelsBox, this.frameBox),
      el("h3", {}, "Corrected records"),
      this.tableBox,
    );
  }

  async init(people: string[]): Promise<void> {
    clear(this.personSelect);
    for (const person of people) {
      this.personSelect.append(el("option", { value: person }, person));
    }
    await this.loadImagesForPerson();
    this.renderTable();
  }

  private async loadImagesForPerson(): Promise<void> {
    const person = this.personSelect.value;
    if (!person) return;
    const page = await this.api.listImages({ person, page_size: 500 });
    clear(this.imageSelect);
    for (const item of page.items) {
      this.imageSelect.append(el("option", { value: item.id }, item.id));
    }
    if (page.items.length) await this.open(page.items[0].id);
  }

  async open(imageId: string): Promise<void> {
    this.detail = await this.api.getImage(imageId);
    this.imageSelect.value = imageId;
    this.edit = draftFrom(imageId, this.detail.record);
    this.difficultCheck.checked = this.edit.draftDifficult;
    this.conflictBox.classList.add("hidden");
    if (this.detail.record) {
      this.records.set(imageId, { ...this.detail.record, person: this.detail.image.person });
    }
    await this.renderLabels();
    this.renderFrame();
    this.renderTable();
    this.renderDirty();
  }

  selectedImage(): string | null {
    return this.detail ? this.detail.image.id : null;
  }

  private chip(label: string, extra: string, section: string): HTMLElement {
    const active = this.edit !== null && this.edit.draftLabels.has(label);
    const chip = el(
      "button",
      { class: `chip ${section}${active ? " active" : ""}`, "data-label": label },
      extra ? `${label} ${extra}` : label,
    );
    chip.addEventListener("click", () => {
      if (!this.edit) return;
      if (this.edit.draftLabels.has(label)) this.edit.draftLabels.delete(label);
      else this.edit.draftLabels.add(label);
      chip.classList.toggle("active");
      this.renderDirty();
    });
    return chip;
  }

  private async renderLabels(): Promise<void> {
    if (!this.detail) return;
    clear(this.labelsBox);
    const detected = el("div", { class: "chip-section detected-section" }, el("h4", {}, "Detected"));
    for (const [label, confidence] of this.detail.label_menu.detected) {
      detected.append(this.chip(label, confidence.toFixed(2), "detected"));
    }
    const alternative = el(
      "div",
      { class: "chip-section alternative-section" },
      el("h4", {}, "Alternative"),
    );
    for (const label of this.detail.label_menu.alternative) {
      alternative.append(this.chip(label, "", "alternative"));
    }
    const suggestions = el("div", { class: "chip-section suggestion-section" }, el("h4", {}, "Suggestions"));
    const suggested = await this.api.getSuggestions(this.detail.image.id);
    for (const s of suggested.suggestions) {
      suggestions.append(this.chip(s.class, `(${s.reason} ${s.score.toFixed(2)})`, "suggestion"));
    }
    if (!suggested.suggestions.length) suggestions.append(el("span", { class: "muted" }, "none"));
    this.labelsBox.append(detected, alternative, suggestions);
  }

  private renderFrame(): void {
    if (!this.detail) return;
    clear(this.frameBox);
    const image = this.detail.image;
    const scale = 360 / image.width;
    const frame = svg("svg", {
      class: "frame-svg",
      width: Math.round(image.width * scale),
      height: Math.round(image.height * scale),
      viewBox: `0 0 ${image.width} ${image.height}`,
    });
    if (image.uri) {
      frame.append(svg("image", { href: image.uri, width: image.width, height: image.height }));
    } else {
      frame.append(
        svg("rect", { width: image.width, height: image.height, fill: "#e6e2da" }),
        svg("text", { x: 12, y: 28, class: "placeholder-text" }, image.id),
      );
    }
    if (this.annotated) {
      for (const det of this.detail.detections) {
        const [x, y, w, h] = det.bbox;
        frame.append(
          svg("rect", {
            x,
            y,
            width: w,
            height: h,
            class: "det-box",
            "data-detection": det.id,
            fill: "none",
            stroke: THEME.detected,
            "stroke-width": 3,
          }),
          svg(
            "text",
            { x: x + 4, y: Math.max(14, y - 6), class: "det-label" },
            `${det.class} ${det.confidence.toFixed(2)}`,
          ),
        );
      }
    }
    this.frameBox.append(frame);
  }

  private renderDirty(): void {
    const dirty = this.detail !== null && this.edit !== null && isDirty(this.edit, this.detail.record);
    this.saveButton.disabled = this.saving || !dirty;
    this.saveButton.classList.toggle("dirty", dirty);
  }

  private async save(overwrite = false): Promise<void> {
    if (!this.edit || !this.detail || this.saving) return;
    this.saving = true;
    this.saveButton.disabled = true;
    try {
      if (!overwrite) {
        // Detect a lost update: someone saved while we were editing.
        const fresh = await this.api.getImage(this.edit.image);
        const freshRevision = fresh.record ? fresh.record.revision : 0;
        if (freshRevision !== this.edit.baseRevision) {
          this.showConflict();
          return;
        }
      }
      const record = await this.api.postLabels(
        this.edit.image,
        [...this.edit.draftLabels].sort(),
        this.edit.draftDifficult,
      );
      this.detail.record = record;
      this.edit = draftFrom(record.image, record);
      this.records.set(record.image, { ...record, person: this.detail.image.person });
      this.renderTable(); // the live table updates without any reload
      this.statusBox.textContent = `saved ${record.image} (revision ${record.revision})`;
      this.onMutated();
    } catch (err) {
      this.statusBox.textContent = `save failed: ${err instanceof Error ? err.message : err} (retry)`;
    } finally {
      this.saving = false;
      this.renderDirty();
    }
  }

  private showConflict(): void {
    clear(this.conflictBox);
    this.conflictBox.classList.remove("hidden");
    const reload = el("button", { class: "conflict-reload" }, "Reload");
    const overwrite = el("button", { class: "conflict-overwrite" }, "Overwrite");
    reload.addEventListener("click", () => {
      this.conflictBox.classList.add("hidden");
      if (this.edit) void this.open(this.edit.image);
    });
    overwrite.addEventListener("click", () => {
      this.conflictBox.classList.add("hidden");
      void this.save(true);
    });
    this.conflictBox.append(
      el("span", {}, "This image was saved by someone else while you edited. "),
      reload,
      overwrite,
    );
  }

  private renderTable(): void {
    const table = el(
      "table",
      { class: "records" },
      el(
        "tr",
        {},
        el("th", {}, "image"),
        el("th", {}, "person"),
        el("th", {}, "labels"),
        el("th", {}, "difficult"),
        el("th", {}, "revision"),
      ),
    );
    for (const record of [...this.records.values()].sort((a, b) => (a.image < b.image ? -1 : 1))) {
      table.append(
        el(
          "tr",
          { "data-image": record.image },
          el("td", {}, record.image),
          el("td", {}, record.person),
          el("td", { class: "labels-cell" }, record.labels.join(", ")),
          el("td", {}, record.difficult ? "yes" : "no"),
          el("td", {}, String(record.revision)),
        ),
      );
    }
    clear(this.tableBox);
    this.tableBox.append(table);
  }

  private async exportCsv(): Promise<void> {
    const bytes = await this.api.getExportCsv();
    this.lastExport = bytes;
    saveFile(bytes, "corrected-labels.csv");
    this.statusBox.textContent = `exported ${bytes.byteLength} bytes`;
  }
}
