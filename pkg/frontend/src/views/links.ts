/** View E: list-with-links.
 *
 * People run down a left-hand column, objects sit on a circle to the right;
 * a curved green link per edge uses width for the number of images of that
 * object a person holds. Hovering a person or object turns its links
 * orange. Objects returned by the totem panel are highlighted.
 */

import { ApiClient, GraphView } from "../api.js";
import { clear, el, svg } from "../dom.js";
import { THEME } from "../theme.js";

const WIDTH = 560;
const HEIGHT = 540;
const CIRCLE_X = 390;
const CIRCLE_Y = HEIGHT / 2;
const RADIUS = 170;

export class ListWithLinksView {
  source: "corrected" | "detected" = "corrected";
  private box: HTMLElement;
  private highlighted = new Set<string>();

  constructor(private api: ApiClient, private root: HTMLElement) {
    this.box = el("div", { class: "links-box" });
    const toggle = el("select", { class: "links-source" });
    for (const option of ["corrected", "detected"]) {
      toggle.append(el("option", { value: option }, option));
    }
    toggle.addEventListener("change", () => {
      this.source = toggle.value as "corrected" | "detected";
      void this.refresh();
    });
    this.root.append(
      el("h2", {}, "E. List-with-links"),
      el("label", {}, "Source ", toggle),
      this.box,
    );
  }

  highlightObjects(objects: string[]): void {
    this.highlighted = new Set(objects);
    void this.refresh();
  }

  async refresh(): Promise<void> {
    const graph = await this.api.getGraph(this.source);
    clear(this.box);
    if (!graph.edges.length) {
      this.box.append(el("p", { class: "muted empty-note" }, "no corrected data yet"));
      return;
    }
    this.box.append(this.render(graph));
  }

  private render(graph: GraphView): SVGElement {
    const chart = svg("svg", { width: WIDTH, height: HEIGHT, class: "links-svg" });
    const people = [...graph.people].sort();
    const owned = [...new Set(graph.edges.map((e) => e.object))].sort();

    const personPos = new Map<string, [number, number]>();
    people.forEach((person, i) => {
      const y = 20 + (i * (HEIGHT - 40)) / Math.max(1, people.length - 1);
      personPos.set(person, [90, y]);
    });
    const objectPos = new Map<string, [number, number]>();
    owned.forEach((object, i) => {
      const angle = (2 * Math.PI * i) / owned.length - Math.PI / 2;
      objectPos.set(object, [
        CIRCLE_X + RADIUS * Math.cos(angle),
        CIRCLE_Y + RADIUS * Math.sin(angle),
      ]);
    });

    const linksByKey: { path: SVGElement; person: string; object: string }[] = [];
    for (const edge of graph.edges) {
      const from = personPos.get(edge.person);
      const to = objectPos.get(edge.object);
      if (!from || !to) continue;
      const midX = (from[0] + to[0]) / 2;
      const path = svg("path", {
        d: `M ${from[0]} ${from[1]} Q ${midX} ${(from[1] + to[1]) / 2 - 40} ${to[0]} ${to[1]}`,
        fill: "none",
        stroke: THEME.link,
        "stroke-width": Math.max(1, Math.sqrt(edge.images) * 1.6),
        class: "link-path",
        "data-person": edge.person,
        "data-object": edge.object,
      });
      chart.append(path);
      linksByKey.push({ path, person: edge.person, object: edge.object });
    }

    const setHover = (predicate: (entry: { person: string; object: string }) => boolean, on: boolean) => {
      for (const entry of linksByKey) {
        if (!predicate(entry)) continue;
        entry.path.setAttribute("stroke", on ? THEME.hover : THEME.link);
        entry.path.classList.toggle("hovered", on);
      }
    };

    for (const [person, [x, y]] of personPos) {
      const label = svg(
        "text",
        { x: x - 6, y: y + 3, class: "person-label", "text-anchor": "end", "data-person": person },
        person,
      );
      label.addEventListener("mouseenter", () => setHover((e) => e.person === person, true));
      label.addEventListener("mouseleave", () => setHover((e) => e.person === person, false));
      chart.append(svg("circle", { cx: x, cy: y, r: 3, fill: THEME.person }), label);
    }
    for (const [object, [x, y]] of objectPos) {
      const hit = this.highlighted.has(object);
      const dot = svg("circle", {
        cx: x,
        cy: y,
        r: hit ? 9 : 5,
        fill: THEME.object,
        stroke: hit ? THEME.hover : "none",
        "stroke-width": hit ? 3 : 0,
        class: `object-dot${hit ? " totem-hit" : ""}`,
        "data-object": object,
      });
      dot.addEventListener("mouseenter", () => setHover((e) => e.object === object, true));
      dot.addEventListener("mouseleave", () => setHover((e) => e.object === object, false));
      chart.append(
        dot,
        svg("text", { x: x + 10, y: y + 3, class: "node-label", "data-object": object }, object),
      );
    }
    return chart;
  }
}
