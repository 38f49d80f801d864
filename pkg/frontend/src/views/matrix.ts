/** View C: person-by-object distribution matrix.
 *
 * Brown circles encode detector output (area proportional to detections,
 * opacity linear in mean confidence); green squares encode corrected truth
 * (area proportional to occurrence count). Marginal totals sit in the
 * headers. Clicking an object row header focuses the ego network.
 */

import { ApiClient, MatrixView } from "../api.js";
import { clear, el, svg } from "../dom.js";
import { MatrixSourceToggle, sqrtScale } from "../state.js";
import { THEME } from "../theme.js";

const CELL = 16;
const LEFT = 120;
const TOP = 64;

export class MatrixViewPanel {
  source: MatrixSourceToggle = "both";
  private chartBox: HTMLElement;

  constructor(
    private api: ApiClient,
    private root: HTMLElement,
    private onFocusObject: (object: string) => void,
  ) {
    this.chartBox = el("div", { class: "matrix-box" });
    const toggle = el("select", { class: "matrix-source" });
    for (const option of ["both", "detected", "corrected"]) {
      toggle.append(el("option", { value: option }, option));
    }
    toggle.addEventListener("change", () => {
      this.source = toggle.value as MatrixSourceToggle;
      void this.refresh();
    });
    this.root.append(
      el("h2", {}, "C. Object distribution matrix"),
      el("label", { class: "matrix-toggle-label" }, "Show ", toggle),
      this.chartBox,
    );
  }

  async refresh(): Promise<void> {
    const matrix = await this.api.getMatrix();
    clear(this.chartBox);
    this.chartBox.append(this.render(matrix));
  }

  private render(matrix: MatrixView): SVGElement {
    const people = Object.keys(matrix.summary.per_person_detected).sort();
    const objects = Object.keys(matrix.summary.per_object_detected).sort();
    const maxDetected = Math.max(1, ...matrix.cells.map((c) => c.detected_count));
    const maxCorrected = Math.max(1, ...matrix.cells.map((c) => c.corrected_count));
    const width = LEFT + people.length * CELL + 50;
    const height = TOP + objects.length * CELL + 8;
    const chart = svg("svg", { width, height, class: "matrix-svg" });

    people.forEach((person, i) => {
      const x = LEFT + i * CELL + CELL / 2;
      chart.append(
        svg(
          "text",
          { x, y: TOP - 26, class: "matrix-col-label", transform: `rotate(-60 ${x} ${TOP - 26})` },
          person,
        ),
        svg(
          "text",
          { x, y: TOP - 10, class: "matrix-marginal", "text-anchor": "middle" },
          `${matrix.summary.per_person_detected[person]}/${matrix.summary.per_person_corrected[person]}`,
        ),
      );
    });
    objects.forEach((object, j) => {
      const y = TOP + j * CELL + CELL * 0.72;
      const label = svg(
        "text",
        { x: LEFT - 8, y, class: "matrix-row-label", "text-anchor": "end", "data-object": object },
        object,
      );
      label.addEventListener("click", () => this.onFocusObject(object));
      chart.append(
        label,
        svg(
          "text",
          { x: LEFT + people.length * CELL + 6, y, class: "matrix-marginal" },
          `${matrix.summary.per_object_detected[object]}/${matrix.summary.per_object_corrected[object]}`,
        ),
      );
    });

    const personIndex = new Map(people.map((p, i) => [p, i]));
    const objectIndex = new Map(objects.map((o, j) => [o, j]));
    for (const cell of matrix.cells) {
      if (!cell.detected_count && !cell.corrected_count) continue;
      const cx = LEFT + (personIndex.get(cell.person) ?? 0) * CELL + CELL / 2;
      const cy = TOP + (objectIndex.get(cell.object) ?? 0) * CELL + CELL / 2;
      const group = svg("g", {
        class: "matrix-cell",
        "data-person": cell.person,
        "data-object": cell.object,
      });
      if (this.source !== "detected" && cell.corrected_count > 0) {
        const side = Math.max(3, sqrtScale(cell.corrected_count, maxCorrected, CELL - 3));
        group.append(
          svg("rect", {
            x: cx - side / 2,
            y: cy - side / 2,
            width: side,
            height: side,
            fill: THEME.corrected,
            class: "corrected-square",
          }),
        );
      }
      if (this.source !== "corrected" && cell.detected_count > 0) {
        const radius = Math.max(1.5, sqrtScale(cell.detected_count, maxDetected, (CELL - 3) / 2));
        group.append(
          svg("circle", {
            cx,
            cy,
            r: radius,
            fill: THEME.detected,
            "fill-opacity": (cell.mean_confidence ?? 0).toFixed(3),
            class: "detected-circle",
          }),
        );
      }
      chart.append(group);
    }
    return chart;
  }
}
