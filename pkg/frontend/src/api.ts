/** Typed client for the review service. The UI never computes analytics
 * locally: every number it renders comes through one of these calls. */

export type Verdict = "unreviewed" | "tp" | "fp";

export interface ImageSummary {
  id: string;
  person: string;
  width: number;
  height: number;
  uri: string | null;
  detections: number;
  max_confidence: number | null;
  labeled: boolean;
  difficult: boolean;
}

export interface Page<T> {
  total: number;
  page: number;
  page_size: number;
  items: T[];
}

export interface DetectionView {
  id: string;
  class: string;
  bbox: [number, number, number, number];
  confidence: number;
  verdict: Verdict;
}

export interface RecordView {
  image: string;
  labels: string[];
  difficult: boolean;
  revision: number;
  updated_at: string;
}

export interface ImageDetail {
  image: { id: string; person: string; width: number; height: number; uri: string | null };
  detections: DetectionView[];
  record: RecordView | null;
  label_menu: { detected: [string, number][]; alternative: string[] };
}

export interface HistogramView {
  bin_edges: number[];
  counts: number[];
}

export interface ClassMetricsView {
  class: string;
  ap: number | null;
  tp: number;
  fp: number;
  unreviewed: number;
  positives: number;
  no_positives: boolean;
}

export interface CoverageView {
  classes_total: number;
  classes_detected: number;
  truth_pairs: number;
  missed_pairs: number;
  missed_fraction: number;
  empty_truth: boolean;
}

export interface MatrixCellView {
  person: string;
  object: string;
  detected_count: number;
  detected_image_count: number;
  mean_confidence: number | null;
  corrected_count: number;
}

export interface MatrixView {
  cells: MatrixCellView[];
  summary: {
    per_person_detected: Record<string, number>;
    per_person_corrected: Record<string, number>;
    per_object_detected: Record<string, number>;
    per_object_corrected: Record<string, number>;
  };
}

export interface GraphEdgeView {
  person: string;
  object: string;
  images: number;
  instances: number;
}

export interface GraphView {
  source: string;
  people: string[];
  objects: string[];
  edges: GraphEdgeView[];
  reference_images: Record<string, string>;
}

export interface EgoView {
  focus: string;
  owners: string[];
  edges: GraphEdgeView[];
}

export interface SharedEntry {
  object: string;
  owners: number;
}

export interface TotemView {
  group_size: number;
  min_images: number;
  candidates: string[];
}

export interface SuggestionView {
  image: string;
  suggestions: { class: string; score: number; reason: "combination" | "overlap" }[];
}

export class ApiError extends Error {
  constructor(public status: number, public code: string, message: string) {
    super(message);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, init);
  if (!response.ok) {
    let code = "HTTP_ERROR";
    let message = `${response.status} on ${url}`;
    try {
      const body = await response.json();
      if (body && body.error) {
        code = body.error.code;
        message = body.error.message;
      }
    } catch {
      // non-JSON error body; keep the generic message
    }
    throw new ApiError(response.status, code, message);
  }
  return (await response.json()) as T;
}

function query(params: Record<string, string | number | boolean | undefined>): string {
  const pairs = Object.entries(params).filter(([, v]) => v !== undefined);
  if (!pairs.length) return "";
  return "?" + pairs.map(([k, v]) => `${k}=${encodeURIComponent(String(v))}`).join("&");
}

export class ApiClient {
  constructor(private base = "") {}

  getSummary() {
    return request<Record<string, number>>(`${this.base}/api/dataset/summary`);
  }

  listImages(params: {
    person?: string;
    max_conf?: number;
    unlabeled?: boolean;
    page?: number;
    page_size?: number;
  }) {
    return request<Page<ImageSummary>>(`${this.base}/api/images${query(params)}`);
  }

  getImage(id: string) {
    return request<ImageDetail>(`${this.base}/api/images/${encodeURIComponent(id)}`);
  }

  postLabels(id: string, labels: string[], difficult: boolean) {
    return request<RecordView>(`${this.base}/api/images/${encodeURIComponent(id)}/labels`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ labels, difficult }),
    });
  }

  postVerdict(detectionId: string, verdict: Verdict) {
    return request<{ detection: string; verdict: Verdict; seq: number }>(
      `${this.base}/api/detections/${encodeURIComponent(detectionId)}/verdict`,
      {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ verdict }),
      },
    );
  }

  postBulkVerdicts(ids: string[], verdict: Verdict) {
    return request<{ applied: number }>(`${this.base}/api/detections/verdicts`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ ids, verdict }),
    });
  }

  getDistribution(bins = 10) {
    return request<HistogramView>(`${this.base}/api/metrics/distribution${query({ bins })}`);
  }

  getClassMetrics() {
    return request<ClassMetricsView[]>(`${this.base}/api/metrics/ap`);
  }

  getCoverage() {
    return request<CoverageView>(`${this.base}/api/metrics/coverage`);
  }

  getMatrix() {
    return request<MatrixView>(`${this.base}/api/matrix`);
  }

  getGraph(source: "corrected" | "detected") {
    return request<GraphView>(`${this.base}/api/graph${query({ source })}`);
  }

  getEgo(object: string, neighbors: boolean) {
    return request<EgoView>(`${this.base}/api/graph/ego${query({ object, neighbors })}`);
  }

  getShared(k: number, mode: "exact" | "at_least") {
    return request<SharedEntry[]>(`${this.base}/api/graph/shared${query({ k, mode })}`);
  }

  getTotem(groupSize: number, minImages: number) {
    return request<TotemView>(
      `${this.base}/api/totem${query({ group_size: groupSize, min_images: minImages })}`,
    );
  }

  getSuggestions(imageId: string, k = 5, iou = 0.5) {
    return request<SuggestionView>(
      `${this.base}/api/suggestions/${encodeURIComponent(imageId)}${query({ k, iou })}`,
    );
  }

  async getExportCsv(): Promise<Uint8Array> {
    const response = await fetch(`${this.base}/api/export.csv`);
    if (!response.ok) throw new ApiError(response.status, "HTTP_ERROR", "export failed");
    return new Uint8Array(await response.arrayBuffer());
  }
}
