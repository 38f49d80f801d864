// Analytics views against pinned API fixtures: the matrix glyph encoding
// (including the green-square-without-circle missed pattern), the totem
// panel, the ego network, the list-with-links hover, and the histogram.

import { beforeEach, describe, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api.js";
import { DistributionView } from "../src/views/distribution.js";
import { EgoNetworkView } from "../src/views/ego.js";
import { ListWithLinksView } from "../src/views/links.js";
import { MatrixViewPanel } from "../src/views/matrix.js";
import { TotemPanel } from "../src/views/totem.js";
import { FakeApi } from "./fake_api.js";

let fake: FakeApi;
let api: ApiClient;
let root: HTMLElement;

beforeEach(() => {
  document.body.innerHTML = '<div id="box"></div>';
  root = document.getElementById("box")!;
  fake = new FakeApi();
  fake.install();
  api = new ApiClient();
});

describe("matrix view", () => {
  it("renders a green square without a brown circle for missed cells", async () => {
    const view = new MatrixViewPanel(api, root, () => {});
    await view.refresh();
    const missed = root.querySelector('.matrix-cell[data-person="Person1"][data-object="gClamp"]')!;
    expect(missed.querySelector(".corrected-square")).toBeTruthy();
    expect(missed.querySelector(".detected-circle")).toBeNull();

    const overlap = root.querySelector('.matrix-cell[data-person="Person1"][data-object="metalKey"]')!;
    expect(overlap.querySelector(".corrected-square")).toBeTruthy();
    expect(overlap.querySelector(".detected-circle")).toBeTruthy();
  });

  it("sets circle opacity from the fetched mean confidence", async () => {
    const view = new MatrixViewPanel(api, root, () => {});
    await view.refresh();
    const circle = root.querySelector(
      '.matrix-cell[data-person="Person1"][data-object="metalKey"] .detected-circle',
    )!;
    expect(circle.getAttribute("fill-opacity")).toBe("0.700");
  });

  it("shows marginal totals straight from the summary", async () => {
    const view = new MatrixViewPanel(api, root, () => {});
    await view.refresh();
    const marginals = [...root.querySelectorAll(".matrix-marginal")].map((n) => n.textContent);
    expect(marginals).toContain("3/3"); // Person1 detected/corrected
    expect(marginals).toContain("0/2"); // gClamp detected/corrected
  });

  it("clicking an object row header reports the focus object", async () => {
    let focused: string | null = null;
    const view = new MatrixViewPanel(api, root, (object) => (focused = object));
    await view.refresh();
    root
      .querySelector<SVGElement>('.matrix-row-label[data-object="gClamp"]')!
      .dispatchEvent(new MouseEvent("click", { bubbles: true }));
    expect(focused).toBe("gClamp");
  });

  it("source toggle hides the other encoding", async () => {
    const view = new MatrixViewPanel(api, root, () => {});
    view.source = "corrected";
    await view.refresh();
    expect(root.querySelectorAll(".detected-circle").length).toBe(0);
    expect(root.querySelectorAll(".corrected-square").length).toBeGreaterThan(0);
  });
});

describe("totem panel with list-with-links", () => {
  it("defaults highlight exactly one object", async () => {
    const links = new ListWithLinksView(api, root);
    const totemBox = document.createElement("div");
    root.append(totemBox);
    const totem = new TotemPanel(api, totemBox, (objects) => links.highlightObjects(objects));
    await links.refresh();
    await totem.run();

    await vi.waitFor(() => {
      expect(root.querySelectorAll(".totem-candidate").length).toBe(1);
      expect(root.querySelectorAll(".totem-hit").length).toBe(1);
    });
    expect(root.querySelector(".totem-candidate")!.textContent).toBe("canadaPencil");
    expect(root.querySelector(".totem-hit")!.getAttribute("data-object")).toBe("canadaPencil");
  });

  it("non-default parameters can empty the candidate list", async () => {
    const totem = new TotemPanel(api, root, () => {});
    root.querySelector<HTMLInputElement>(".totem-min-images")!.value = "5";
    await totem.run();
    expect(root.querySelectorAll(".totem-candidate").length).toBe(0);
    expect(root.textContent).toContain("no object matches");
  });
});

describe("list-with-links", () => {
  it("link width grows with the fetched image weight", async () => {
    const links = new ListWithLinksView(api, root);
    await links.refresh();
    const p1 = root.querySelector('.link-path[data-person="Person1"][data-object="canadaPencil"]')!;
    const p2 = root.querySelector('.link-path[data-person="Person2"][data-object="canadaPencil"]')!;
    const w1 = Number(p1.getAttribute("stroke-width"));
    const w2 = Number(p2.getAttribute("stroke-width"));
    expect(w2).toBeGreaterThan(w1); // 3 images vs 2
  });

  it("hovering a person turns exactly their links orange", async () => {
    const links = new ListWithLinksView(api, root);
    await links.refresh();
    const label = root.querySelector<SVGElement>('.person-label[data-person="Person1"]')!;
    label.dispatchEvent(new MouseEvent("mouseenter", { bubbles: false }));
    const hovered = [...root.querySelectorAll(".link-path.hovered")];
    expect(hovered.length).toBe(2); // Person1 has two edges
    expect(hovered.every((p) => p.getAttribute("data-person") === "Person1")).toBe(true);
    label.dispatchEvent(new MouseEvent("mouseleave", { bubbles: false }));
    expect(root.querySelectorAll(".link-path.hovered").length).toBe(0);
  });
});

describe("ego network", () => {
  it("draws the owners around the focus with a reference image note", async () => {
    const ego = new EgoNetworkView(api, root);
    await ego.focusOn("canadaPencil");
    expect(root.querySelectorAll(".ego-owner").length).toBe(2);
    expect(root.querySelector(".ego-focus")).toBeTruthy();
    expect(root.textContent).toContain("reference image: i1");
  });

  it("renders an explicit empty state for unowned objects", async () => {
    const ego = new EgoNetworkView(api, root);
    await ego.focusOn("gClamp");
    expect(root.querySelector(".empty-note")!.textContent).toContain("no corrected data yet");
  });
});

describe("distribution histogram", () => {
  it("renders one bar per bin with the fetched counts", async () => {
    const view = new DistributionView(api, root, () => {}, () => {});
    await view.refresh();
    const bars = [...root.querySelectorAll(".histogram-svg rect")];
    expect(bars.length).toBe(10);
    expect(bars.map((b) => Number(b.getAttribute("data-count")))).toEqual([
      0, 0, 0, 0, 0, 1, 0, 0, 0, 1,
    ]);
  });
});
