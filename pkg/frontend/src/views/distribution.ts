/** View A: confidence distribution, low-confidence triage grid, AP panel.
 *
 * Right-click on a detection badge cycles its verdict and posts it; clicking
 * a badge toggles it into the bulk selection, applied with one atomic
 * request. Every refresh re-fetches from the API.
 */

import { ApiClient, DetectionView, Verdict } from "../api.js";
import { clear, el, svg } from "../dom.js";
import { cycleVerdict } from "../state.js";
import { THEME } from "../theme.js";

const VERDICT_COLORS: Record<Verdict, string> = {
  tp: THEME.verdictTp,
  fp: THEME.verdictFp,
  unreviewed: THEME.verdictUnreviewed,
};

export class DistributionView {
  threshold = 1.0;
  private selection = new Set<string>();
  private histogramBox: HTMLElement;
  private gridBox: HTMLElement;
  private apBox: HTMLElement;
  private statusBox: HTMLElement;

  constructor(
    private api: ApiClient,
    private root: HTMLElement,
    private onMutated: () => void,
    private onOpenImage: (id: string) => void,
  ) {
    this.histogramBox = el("div", { class: "histogram" });
    this.gridBox = el("div", { class: "image-grid" });
    this.apBox = el("div", { class: "ap-panel" });
    this.statusBox = el("div", { class: "status" });

    const slider = el("input", {
      type: "range",
      min: "0",
      max: "1",
      step: "0.05",
      value: String(this.threshold),
      class: "threshold-slider",
    });
    slider.addEventListener("input", () => {
      this.threshold = Number(slider.value);
      sliderLabel.textContent = `max confidence < ${this.threshold.toFixed(2)}`;
      void this.refreshGrid();
    });
    const sliderLabel = el("span", { class: "slider-label" }, `max confidence < ${this.threshold.toFixed(2)}`);

    const markTp = el("button", { class: "bulk-tp" }, "Mark selected TP");
    const markFp = el("button", { class: "bulk-fp" }, "Mark selected FP");
    markTp.addEventListener("click", () => void this.applyBulk("tp"));
    markFp.addEventListener("click", () => void this.applyBulk("fp"));

    this.root.append(
      el("h2", {}, "A. Detection distribution"),
      this.histogramBox,
      el("div", { class: "triage-controls" }, slider, sliderLabel, markTp, markFp, this.statusBox),
      this.gridBox,
      el("h3", {}, "Average precision per class"),
      this.apBox,
    );
  }

  async refresh(): Promise<void> {
    await Promise.all([this.refreshHistogram(), this.refreshGrid(), this.refreshAp()]);
  }

  private async refreshHistogram(): Promise<void> {
    const hist = await this.api.getDistribution(10);
    const width = 320;
    const height = 90;
    const max = Math.max(1, ...hist.counts);
    const bar = width / hist.counts.length;
    const chart = svg("svg", { width, height, class: "histogram-svg", role: "img" });
    hist.counts.forEach((count, i) => {
      const h = (count / max) * (height - 16);
      chart.append(
        svg("rect", {
          x: i * bar + 1,
          y: height - h,
          width: bar - 2,
          height: h,
          fill: THEME.detected,
          "data-bin": i,
          "data-count": count,
        }),
      );
    });
    clear(this.histogramBox);
    this.histogramBox.append(chart);
  }

  private async refreshGrid(): Promise<void> {
    const page = await this.api.listImages({ max_conf: this.threshold, page_size: 60 });
    clear(this.gridBox);
    for (const item of page.items) {
      const detail = el("div", { class: "image-card", "data-image": item.id });
      const title = el("a", { class: "image-card-title", href: "#" }, `${item.id} (${item.person})`);
      title.addEventListener("click", (event) => {
        event.preventDefault();
        this.onOpenImage(item.id);
      });
      detail.append(title);
      const badges = el("div", { class: "badges" });
      const full = await this.api.getImage(item.id);
      for (const det of full.detections) {
        badges.append(this.badge(det));
      }
      if (!full.detections.length) badges.append(el("span", { class: "no-dets" }, "no detections"));
      detail.append(badges);
      this.gridBox.append(detail);
    }
    this.statusBox.textContent = `${page.total} image(s) under threshold`;
  }

  private badge(det: DetectionView): HTMLElement {
    const badge = el(
      "span",
      {
        class: `badge verdict-${det.verdict}${this.selection.has(det.id) ? " selected" : ""}`,
        "data-detection": det.id,
        "data-verdict": det.verdict,
        style: `border-color: ${VERDICT_COLORS[det.verdict]}`,
        title: "click: select for bulk, right-click: cycle verdict",
      },
      `${det.class} ${det.confidence.toFixed(2)} [${det.verdict}]`,
    );
    badge.addEventListener("click", () => {
      if (this.selection.has(det.id)) this.selection.delete(det.id);
      else this.selection.add(det.id);
      badge.classList.toggle("selected");
    });
    badge.addEventListener("contextmenu", (event) => {
      event.preventDefault();
      void this.api
        .postVerdict(det.id, cycleVerdict(det.verdict))
        .then(() => this.onMutated())
        .catch((err) => this.showError(err));
    });
    return badge;
  }

  private async applyBulk(verdict: Verdict): Promise<void> {
    if (!this.selection.size) {
      this.statusBox.textContent = "nothing selected";
      return;
    }
    try {
      const result = await this.api.postBulkVerdicts([...this.selection].sort(), verdict);
      this.statusBox.textContent = `marked ${result.applied} detection(s) ${verdict}`;
      this.selection.clear();
      this.onMutated();
    } catch (err) {
      this.showError(err); // atomic on the server: nothing changed
    }
  }

  private async refreshAp(): Promise<void> {
    const rows = await this.api.getClassMetrics();
    const table = el(
      "table",
      { class: "ap-table" },
      el(
        "tr",
        {},
        el("th", {}, "class"),
        el("th", {}, "AP"),
        el("th", {}, "TP"),
        el("th", {}, "FP"),
        el("th", {}, "unreviewed"),
        el("th", {}, "positives"),
      ),
    );
    for (const row of rows) {
      table.append(
        el(
          "tr",
          { "data-class": row.class },
          el("td", {}, row.class),
          el("td", { class: "ap-value" }, row.no_positives ? "n/a" : (row.ap ?? 0).toFixed(4)),
          el("td", {}, String(row.tp)),
          el("td", {}, String(row.fp)),
          el("td", {}, String(row.unreviewed)),
          el("td", {}, String(row.positives)),
        ),
      );
    }
    clear(this.apBox);
    this.apBox.append(table);
  }

  private showError(err: unknown): void {
    this.statusBox.textContent = `request failed: ${err instanceof Error ? err.message : err} (retry)`;
  }
}
