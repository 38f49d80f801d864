/** View state and draft-edit bookkeeping shared across panels. */

import type { RecordView, Verdict } from "./api.js";

export type MatrixSourceToggle = "detected" | "corrected" | "both";

export interface ViewState {
  selectedImage: string | null;
  selectedPerson: string | null;
  threshold: number;
  matrixSource: MatrixSourceToggle;
  focusObject: string | null;
}

export function createViewState(): ViewState {
  return {
    selectedImage: null,
    selectedPerson: null,
    threshold: 1.0,
    matrixSource: "both",
    focusObject: null,
  };
}

/** Right-click cycles unreviewed -> tp -> fp -> unreviewed. */
export function cycleVerdict(current: Verdict): Verdict {
  if (current === "unreviewed") return "tp";
  if (current === "tp") return "fp";
  return "unreviewed";
}

export interface PendingEdit {
  image: string;
  draftLabels: Set<string>;
  draftDifficult: boolean;
  /** revision the draft was based on; used to detect a lost update */
  baseRevision: number;
}

export function draftFrom(image: string, record: RecordView | null): PendingEdit {
  return {
    image,
    draftLabels: new Set(record ? record.labels : []),
    draftDifficult: record ? record.difficult : false,
    baseRevision: record ? record.revision : 0,
  };
}

/** Dirty iff the draft differs from the last-saved record. */
export function isDirty(edit: PendingEdit, record: RecordView | null): boolean {
  const savedLabels = new Set(record ? record.labels : []);
  const savedDifficult = record ? record.difficult : false;
  if (edit.draftDifficult !== savedDifficult) return true;
  if (edit.draftLabels.size !== savedLabels.size) return true;
  for (const label of edit.draftLabels) {
    if (!savedLabels.has(label)) return true;
  }
  return false;
}

/** Area-true size encoding: radius/side proportional to sqrt(count). */
export function sqrtScale(count: number, maxCount: number, maxSize: number): number {
  if (count <= 0 || maxCount <= 0) return 0;
  return Math.sqrt(count / maxCount) * maxSize;
}
