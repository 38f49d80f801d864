// The correction loop end to end against the fake service: toggle a label,
// save, watch the table update in place; right-click a verdict and watch
// the analytics panels re-fetch; export and compare bytes.

import { beforeEach, describe, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api.js";
import { App } from "../src/app.js";
import { FakeApi } from "./fake_api.js";

let fake: FakeApi;
let app: App;
let root: HTMLElement;

async function mount(): Promise<void> {
  document.body.innerHTML = '<main id="app"></main>';
  root = document.getElementById("app")!;
  fake = new FakeApi();
  fake.install();
  app = new App(new ApiClient(), root);
  await app.start();
}

beforeEach(async () => {
  await mount();
});

function chip(label: string): HTMLElement {
  const node = root.querySelector<HTMLElement>(`#view-b .chip[data-label="${label}"]`);
  if (!node) throw new Error(`no chip for ${label}`);
  return node;
}

describe("correction loop", () => {
  it("toggle label then Save updates the table row without a reload", async () => {
    const tableBefore = root.querySelector(".record-table")!;
    chip("gClamp").click();

    const save = root.querySelector<HTMLButtonElement>(".save-button")!;
    expect(save.disabled).toBe(false); // draft is dirty now
    save.click();

    await vi.waitFor(() => {
      const row = root.querySelector('.records tr[data-image="i1"]');
      expect(row, "saved row should appear").toBeTruthy();
      expect(row!.textContent).toContain("gClamp");
    });
    expect(fake.records.get("i1")!.labels).toEqual(["gClamp"]);
    // same document, same table container: updated in place, not reloaded
    expect(root.querySelector(".record-table")).toBe(tableBefore);
    expect(root.isConnected).toBe(true);
  });

  it("save round-trips the difficult flag", async () => {
    const difficult = root.querySelector<HTMLInputElement>(".difficult-check")!;
    difficult.checked = true;
    difficult.dispatchEvent(new Event("change"));
    chip("gClamp").click();
    root.querySelector<HTMLButtonElement>(".save-button")!.click();
    await vi.waitFor(() => expect(fake.records.get("i1")?.difficult).toBe(true));
    await app.correction.open("i1");
    expect(root.querySelector<HTMLInputElement>(".difficult-check")!.checked).toBe(true);
  });

  it("right-click cycles the verdict and the analytics panels re-fetch", async () => {
    // positives exist once a record is saved; until then AP is undefined
    chip("metalKey").click();
    root.querySelector<HTMLButtonElement>(".save-button")!.click();
    await vi.waitFor(() => expect(fake.records.has("i1")).toBe(true));

    const badge = root.querySelector<HTMLElement>('.badge[data-detection="d1"]')!;
    expect(badge.getAttribute("data-verdict")).toBe("unreviewed");

    const apBefore = fake.countCalls("GET /api/metrics/ap");
    const histBefore = fake.countCalls("GET /api/metrics/distribution");
    badge.dispatchEvent(new MouseEvent("contextmenu", { bubbles: true, cancelable: true }));

    await vi.waitFor(() => expect(fake.verdicts.get("d1")).toBe("tp"));
    await vi.waitFor(() => {
      expect(fake.countCalls("GET /api/metrics/ap")).toBeGreaterThan(apBefore);
      expect(fake.countCalls("GET /api/metrics/distribution")).toBeGreaterThan(histBefore);
    });
    // the AP table now shows the value the server reported, not a local one
    await vi.waitFor(() => {
      const cell = root.querySelector('.ap-table tr[data-class="metalKey"] .ap-value');
      expect(cell!.textContent).toBe("0.5000");
    });
  });

  it("a rejected bulk verdict changes no badges", async () => {
    fake.failBulk = true;
    const badge = root.querySelector<HTMLElement>('.badge[data-detection="d1"]')!;
    badge.click(); // select for bulk
    root.querySelector<HTMLButtonElement>(".bulk-fp")!.click();

    await vi.waitFor(() => {
      expect(root.querySelector("#view-a .status")!.textContent).toContain("request failed");
    });
    expect(fake.verdicts.size).toBe(0);
    expect(
      root.querySelectorAll('#view-a .badge[data-verdict="unreviewed"]').length,
    ).toBeGreaterThan(0);
    expect(root.querySelectorAll('#view-a .badge[data-verdict="fp"]').length).toBe(0);
  });

  it("a successful bulk verdict posts one atomic request", async () => {
    for (const badge of root.querySelectorAll<HTMLElement>("#view-a .badge")) badge.click();
    const bulkBefore = fake.countCalls("POST /api/detections/verdicts");
    root.querySelector<HTMLButtonElement>(".bulk-fp")!.click();
    await vi.waitFor(() => expect(fake.verdicts.get("d1")).toBe("fp"));
    expect(fake.verdicts.get("d2")).toBe("fp");
    expect(fake.countCalls("POST /api/detections/verdicts")).toBe(bulkBefore + 1);
  });

  it("Export button fetches bytes identical to /api/export.csv", async () => {
    chip("gClamp").click();
    root.querySelector<HTMLButtonElement>(".save-button")!.click();
    await vi.waitFor(() => expect(fake.records.has("i1")).toBe(true));

    root.querySelector<HTMLButtonElement>(".export-button")!.click();
    await vi.waitFor(() => expect(app.correction.lastExport).not.toBeNull());

    const direct = new Uint8Array(
      await (fake.handle("/api/export.csv") as Response).arrayBuffer(),
    );
    expect([...app.correction.lastExport!]).toEqual([...direct]);
    expect(direct.length).toBeGreaterThan("image_id,person_id,label,origin,difficult\n".length);
  });

  it("shows suggestion chips with their reason", () => {
    const suggestion = root.querySelector(".suggestion-section .chip");
    expect(suggestion).toBeTruthy();
    expect(suggestion!.textContent).toContain("gClamp");
    expect(suggestion!.textContent).toContain("combination");
  });

  it("annotated frame draws boxes with confidence to two decimals", () => {
    const boxes = root.querySelectorAll("#view-b .det-box");
    expect(boxes.length).toBe(2);
    const labels = [...root.querySelectorAll("#view-b .det-label")].map((n) => n.textContent);
    expect(labels).toContain("metalKey 0.90");
    expect(labels).toContain("canadaPencil 0.50");
  });

  it("prompts on a conflicting save instead of silently overwriting", async () => {
    chip("gClamp").click();
    // someone else saves the image while we edit
    fake.records.set("i1", { labels: ["metalKey"], difficult: false, revision: 7 });
    root.querySelector<HTMLButtonElement>(".save-button")!.click();
    await vi.waitFor(() => {
      expect(root.querySelector(".conflict:not(.hidden)")).toBeTruthy();
    });
    expect(fake.records.get("i1")!.labels).toEqual(["metalKey"]); // untouched
    root.querySelector<HTMLButtonElement>(".conflict-overwrite")!.click();
    await vi.waitFor(() => expect(fake.records.get("i1")!.labels).toEqual(["gClamp"]));
    expect(fake.records.get("i1")!.revision).toBe(8);
  });
});
