/** Totem panel: run the shared-subgroup heuristic with editable parameters
 * and highlight the candidates in the list-with-links view. */

import { ApiClient } from "../api.js";
import { clear, el } from "../dom.js";

export class TotemPanel {
  private groupInput: HTMLInputElement;
  private minImagesInput: HTMLInputElement;
  private resultBox: HTMLElement;

  constructor(
    private api: ApiClient,
    private root: HTMLElement,
    private onCandidates: (objects: string[]) => void,
  ) {
    this.groupInput = el("input", { type: "number", min: "1", value: "8", class: "totem-group" });
    this.minImagesInput = el("input", { type: "number", min: "1", value: "2", class: "totem-min-images" });
    this.resultBox = el("div", { class: "totem-results" });
    const run = el("button", { class: "totem-run" }, "Find totem");
    run.addEventListener("click", () => void this.run());
    this.root.append(
      el("h3", {}, "Totem search"),
      el(
        "div",
        { class: "totem-controls" },
        el("label", {}, "group size ", this.groupInput),
        el("label", {}, "min images ", this.minImagesInput),
        run,
      ),
      this.resultBox,
    );
  }

  async run(): Promise<void> {
    const groupSize = Number(this.groupInput.value);
    const minImages = Number(this.minImagesInput.value);
    const result = await this.api.getTotem(groupSize, minImages);
    clear(this.resultBox);
    if (!result.candidates.length) {
      this.resultBox.append(el("p", { class: "muted" }, "no object matches"));
    } else {
      const list = el("ul", { class: "totem-list" });
      for (const candidate of result.candidates) {
        list.append(el("li", { class: "totem-candidate", "data-object": candidate }, candidate));
      }
      this.resultBox.append(list);
    }
    this.onCandidates(result.candidates);
  }
}
