/** View D: ego network of one focus object.
 *
 * The focus object sits at the center linked to a reference image when the
 * dataset provides one; its owners form a blue inner ring, and with
 * neighbors enabled their other belongings form a yellow outer ring.
 * Layout is deterministic (sorted nodes on fixed circles).
 */

import { ApiClient } from "../api.js";
import { clear, el, svg } from "../dom.js";
import { THEME } from "../theme.js";

const SIZE = 420;
const CENTER = SIZE / 2;

export class EgoNetworkView {
  focus: string | null = null;
  neighbors = true;
  private box: HTMLElement;
  private heading: HTMLElement;

  constructor(private api: ApiClient, private root: HTMLElement) {
    this.box = el("div", { class: "ego-box" });
    this.heading = el("h2", {}, "D. Network of top object");
    const toggle = el("input", { type: "checkbox", class: "neighbors-toggle", checked: true });
    toggle.addEventListener("change", () => {
      this.neighbors = toggle.checked;
      void this.refresh();
    });
    this.root.append(
      this.heading,
      el("label", { class: "neighbors-label" }, toggle, " include owners' other objects"),
      this.box,
    );
  }

  async focusOn(object: string): Promise<void> {
    this.focus = object;
    await this.refresh();
  }

  async refresh(): Promise<void> {
    clear(this.box);
    if (!this.focus) {
      this.box.append(el("p", { class: "muted empty-note" }, "click an object in the matrix to focus it"));
      return;
    }
    const [ego, graph] = await Promise.all([
      this.api.getEgo(this.focus, this.neighbors),
      this.api.getGraph("corrected"),
    ]);
    this.heading.textContent = `D. Network around ${this.focus}`;
    if (!ego.owners.length) {
      this.box.append(el("p", { class: "muted empty-note" }, "no corrected data yet for this object"));
      return;
    }

    const chart = svg("svg", { width: SIZE, height: SIZE, class: "ego-svg" });
    const owners = [...ego.owners].sort();
    const ownerPos = new Map<string, [number, number]>();
    owners.forEach((owner, i) => {
      const angle = (2 * Math.PI * i) / owners.length - Math.PI / 2;
      ownerPos.set(owner, [CENTER + 120 * Math.cos(angle), CENTER + 120 * Math.sin(angle)]);
    });
    const otherObjects = [...new Set(ego.edges.map((e) => e.object))]
      .filter((o) => o !== this.focus)
      .sort();
    const objectPos = new Map<string, [number, number]>([[this.focus, [CENTER, CENTER]]]);
    otherObjects.forEach((object, i) => {
      const angle = (2 * Math.PI * i) / Math.max(1, otherObjects.length) - Math.PI / 2;
      objectPos.set(object, [CENTER + 190 * Math.cos(angle), CENTER + 190 * Math.sin(angle)]);
    });

    for (const edge of ego.edges) {
      const from = ownerPos.get(edge.person);
      const to = objectPos.get(edge.object);
      if (!from || !to) continue;
      chart.append(
        svg("line", {
          x1: from[0],
          y1: from[1],
          x2: to[0],
          y2: to[1],
          class: "ego-edge",
          stroke: THEME.link,
          "stroke-width": Math.max(1, Math.sqrt(edge.images) * 1.5),
        }),
      );
    }
    for (const [object, [x, y]] of objectPos) {
      const isFocus = object === this.focus;
      chart.append(
        svg("circle", {
          cx: x,
          cy: y,
          r: isFocus ? 16 : 8,
          fill: THEME.object,
          class: isFocus ? "ego-focus" : "ego-object",
          "data-object": object,
        }),
        svg("text", { x: x + 10, y: y - 8, class: "node-label" }, object),
      );
    }
    for (const [person, [x, y]] of ownerPos) {
      chart.append(
        svg("circle", { cx: x, cy: y, r: 9, fill: THEME.person, class: "ego-owner", "data-person": person }),
        svg("text", { x: x + 10, y: y + 4, class: "node-label" }, person),
      );
    }
    this.box.append(chart);

    const reference = graph.reference_images[this.focus];
    if (reference) {
      this.box.append(el("p", { class: "reference-note" }, `reference image: ${reference}`));
    }
  }
}
