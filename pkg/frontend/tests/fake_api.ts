/** In-memory stand-in for the review service.
 *
 * Shapes mirror the real API. Analytics values are pinned constants (bumped
 * on mutation), so a test can prove the UI renders fetched numbers instead
 * of computing its own. Every handled request is recorded in `calls`.
 */

export interface FakeDetection {
  id: string;
  image: string;
  class: string;
  bbox: [number, number, number, number];
  confidence: number;
}

const ENCODER = new TextEncoder();

function json(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

function error(status: number, code: string, message: string): Response {
  return json({ error: { code, message } }, status);
}

export class FakeApi {
  calls: string[] = [];
  failBulk = false;

  classes = ["canadaPencil", "gClamp", "metalKey"];
  people = ["Person1", "Person2"];
  images = [
    { id: "i1", person: "Person1", width: 200, height: 100, uri: null },
    { id: "i2", person: "Person2", width: 200, height: 100, uri: null },
  ];
  detections: FakeDetection[] = [
    { id: "d1", image: "i1", class: "metalKey", bbox: [10, 10, 50, 40], confidence: 0.9 },
    { id: "d2", image: "i1", class: "canadaPencil", bbox: [30, 20, 60, 30], confidence: 0.5 },
  ];

  records = new Map<string, { labels: string[]; difficult: boolean; revision: number }>();
  verdicts = new Map<string, string>();
  mutations = 0;

  csvBytes(): Uint8Array {
    const rows = ["image_id,person_id,label,origin,difficult"];
    for (const image of [...this.records.keys()].sort()) {
      const record = this.records.get(image)!;
      const person = this.images.find((i) => i.id === image)?.person ?? "?";
      for (const label of [...record.labels].sort()) {
        rows.push(`${image},${person},${label},manual,${record.difficult ? 1 : 0}`);
      }
    }
    return ENCODER.encode(rows.join("\n") + "\n");
  }

  countCalls(prefix: string): number {
    return this.calls.filter((c) => c.startsWith(prefix)).length;
  }

  install(): void {
    globalThis.fetch = ((input: RequestInfo | URL, init?: RequestInit) =>
      Promise.resolve(this.handle(String(input), init))) as typeof fetch;
  }

  handle(rawUrl: string, init?: RequestInit): Response {
    const url = new URL(rawUrl, "http://test");
    const method = init?.method ?? "GET";
    const path = url.pathname;
    this.calls.push(`${method} ${path}`);
    const body = init?.body ? JSON.parse(String(init.body)) : null;

    if (path === "/api/dataset/summary") {
      return json({ images: 2, people: 2, classes: 3, detections: 2 });
    }
    if (path === "/api/images") {
      const person = url.searchParams.get("person");
      const items = this.images
        .filter((img) => !person || img.person === person)
        .map((img) => {
          const dets = this.detections.filter((d) => d.image === img.id);
          return {
            ...img,
            detections: dets.length,
            max_confidence: dets.length ? Math.max(...dets.map((d) => d.confidence)) : null,
            labeled: this.records.has(img.id),
            difficult: this.records.get(img.id)?.difficult ?? false,
          };
        });
      return json({ total: items.length, page: 1, page_size: 60, items });
    }
    const imageDetail = path.match(/^\/api\/images\/([^/]+)$/);
    if (imageDetail && method === "GET") {
      const image = this.images.find((i) => i.id === imageDetail[1]);
      if (!image) return error(404, "UNKNOWN_IMAGE", "no such image");
      const dets = this.detections.filter((d) => d.image === image.id);
      const best = new Map<string, number>();
      for (const d of dets) best.set(d.class, Math.max(best.get(d.class) ?? 0, d.confidence));
      const detected = [...best.entries()].sort((a, b) => b[1] - a[1] || (a[0] < b[0] ? -1 : 1));
      const record = this.records.get(image.id);
      return json({
        image,
        detections: dets.map((d) => ({ ...d, verdict: this.verdicts.get(d.id) ?? "unreviewed" })),
        record: record ? { image: image.id, updated_at: "t", ...record } : null,
        label_menu: {
          detected,
          alternative: this.classes.filter((c) => !best.has(c)).sort(),
        },
      });
    }
    const labelsPost = path.match(/^\/api\/images\/([^/]+)\/labels$/);
    if (labelsPost && method === "POST") {
      const id = labelsPost[1];
      if (!this.images.some((i) => i.id === id)) return error(404, "UNKNOWN_IMAGE", "no such image");
      for (const label of body.labels) {
        if (!this.classes.includes(label)) return error(400, "UNKNOWN_LABEL", `bad label ${label}`);
      }
      const previous = this.records.get(id);
      const record = {
        labels: [...body.labels].sort(),
        difficult: Boolean(body.difficult),
        revision: (previous?.revision ?? 0) + 1,
      };
      this.records.set(id, record);
      this.mutations += 1;
      return json({ image: id, updated_at: "t", ...record });
    }
    const verdictPost = path.match(/^\/api\/detections\/([^/]+)\/verdict$/);
    if (verdictPost && method === "POST") {
      const id = verdictPost[1];
      if (!this.detections.some((d) => d.id === id)) {
        return error(404, "UNKNOWN_DETECTION", "no such detection");
      }
      this.verdicts.set(id, body.verdict);
      this.mutations += 1;
      return json({ detection: id, verdict: body.verdict, seq: this.mutations });
    }
    if (path === "/api/detections/verdicts" && method === "POST") {
      if (this.failBulk || body.ids.some((id: string) => !this.detections.some((d) => d.id === id))) {
        return error(404, "UNKNOWN_DETECTION", "batch rejected; nothing changed");
      }
      for (const id of body.ids) this.verdicts.set(id, body.verdict);
      this.mutations += 1;
      return json({ applied: body.ids.length, verdict: body.verdict });
    }
    if (path === "/api/metrics/distribution") {
      return json({
        bin_edges: [0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1],
        counts: [0, 0, 0, 0, 0, 1, 0, 0, 0, 1],
      });
    }
    if (path === "/api/metrics/ap") {
      // pinned values that change once anything is reviewed
      const reviewed = [...this.verdicts.values()].some((v) => v !== "unreviewed");
      return json(
        this.classes.map((c) => ({
          class: c,
          ap: reviewed ? 0.5 : null,
          tp: reviewed ? 1 : 0,
          fp: 0,
          unreviewed: reviewed ? 1 : 2,
          positives: this.records.size,
          no_positives: this.records.size === 0,
        })),
      );
    }
    if (path === "/api/metrics/coverage") {
      return json({
        classes_total: 3,
        classes_detected: 2,
        truth_pairs: 100,
        missed_pairs: 53,
        missed_fraction: 0.53,
        empty_truth: false,
      });
    }
    if (path === "/api/matrix") {
      return json({
        cells: [
          // the "missed" narrative: corrected without any detection
          { person: "Person1", object: "gClamp", detected_count: 0, detected_image_count: 0, mean_confidence: null, corrected_count: 2 },
          { person: "Person1", object: "metalKey", detected_count: 3, detected_image_count: 2, mean_confidence: 0.7, corrected_count: 1 },
          { person: "Person2", object: "canadaPencil", detected_count: 1, detected_image_count: 1, mean_confidence: 0.4, corrected_count: 0 },
        ],
        summary: {
          per_person_detected: { Person1: 3, Person2: 1 },
          per_person_corrected: { Person1: 3, Person2: 0 },
          per_object_detected: { canadaPencil: 1, gClamp: 0, metalKey: 3 },
          per_object_corrected: { canadaPencil: 0, gClamp: 2, metalKey: 1 },
        },
      });
    }
    if (path === "/api/graph") {
      return json({
        source: url.searchParams.get("source") ?? "corrected",
        people: this.people,
        objects: this.classes,
        edges: [
          { person: "Person1", object: "canadaPencil", images: 2, instances: 2 },
          { person: "Person2", object: "canadaPencil", images: 3, instances: 3 },
          { person: "Person1", object: "metalKey", images: 1, instances: 1 },
        ],
        reference_images: { canadaPencil: "i1" },
      });
    }
    if (path === "/api/graph/ego") {
      const object = url.searchParams.get("object");
      if (!this.classes.includes(object ?? "")) return error(404, "UNKNOWN_OBJECT", "no such object");
      if (object === "canadaPencil") {
        return json({
          focus: object,
          owners: ["Person1", "Person2"],
          edges: [
            { person: "Person1", object: "canadaPencil", images: 2, instances: 2 },
            { person: "Person2", object: "canadaPencil", images: 3, instances: 3 },
            { person: "Person1", object: "metalKey", images: 1, instances: 1 },
          ],
        });
      }
      return json({ focus: object, owners: [], edges: [] });
    }
    if (path === "/api/graph/shared") {
      return json([{ object: "canadaPencil", owners: 2 }]);
    }
    if (path === "/api/totem") {
      const groupSize = Number(url.searchParams.get("group_size") ?? "8");
      const minImages = Number(url.searchParams.get("min_images") ?? "2");
      return json({
        group_size: groupSize,
        min_images: minImages,
        candidates: groupSize === 8 && minImages === 2 ? ["canadaPencil"] : [],
      });
    }
    if (path.startsWith("/api/suggestions/")) {
      return json({
        image: path.split("/").pop(),
        suggestions: [{ class: "gClamp", score: 0.75, reason: "combination" }],
      });
    }
    if (path === "/api/export.csv") {
      return new Response(this.csvBytes().slice().buffer, {
        status: 200,
        headers: { "content-type": "text/csv; charset=utf-8" },
      });
    }
    return error(404, "NOT_FOUND", `unhandled ${method} ${path}`);
  }
}
