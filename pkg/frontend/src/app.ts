/** Wires the five coordinated views over one API client.
 *
 * After any successful mutation every dependent view re-fetches; nothing is
 * computed client-side from stale copies.
 */

import { ApiClient } from "./api.js";
import { clear, el } from "./dom.js";
import { createViewState, ViewState } from "./state.js";
import { CorrectionPanel } from "./views/correction.js";
import { DistributionView } from "./views/distribution.js";
import { EgoNetworkView } from "./views/ego.js";
import { ListWithLinksView } from "./views/links.js";
import { MatrixViewPanel } from "./views/matrix.js";
import { TotemPanel } from "./views/totem.js";

export class App {
  readonly state: ViewState = createViewState();
  readonly distribution: DistributionView;
  readonly correction: CorrectionPanel;
  readonly matrix: MatrixViewPanel;
  readonly ego: EgoNetworkView;
  readonly links: ListWithLinksView;
  readonly totem: TotemPanel;
  private coverageBox: HTMLElement;

  constructor(private api: ApiClient, root: HTMLElement) {
    clear(root);
    this.coverageBox = el("div", { class: "coverage-banner" });
    const sectionA = el("section", { id: "view-a" });
    const sectionB = el("section", { id: "view-b" });
    const sectionC = el("section", { id: "view-c" });
    const sectionD = el("section", { id: "view-d" });
    const sectionE = el("section", { id: "view-e" });
    const totemBox = el("div", { id: "totem-panel" });
    root.append(this.coverageBox, sectionA, sectionB, sectionC, sectionD, sectionE);
    sectionE.append(totemBox);

    const onMutated = () => void this.refreshAnalytics();
    this.distribution = new DistributionView(api, sectionA, onMutated, (id) => {
      this.state.selectedImage = id;
      void this.correction.open(id);
    });
    this.correction = new CorrectionPanel(api, sectionB, onMutated);
    this.matrix = new MatrixViewPanel(api, sectionC, (object) => {
      this.state.focusObject = object;
      void this.ego.focusOn(object);
    });
    this.ego = new EgoNetworkView(api, sectionD);
    this.links = new ListWithLinksView(api, sectionE);
    this.totem = new TotemPanel(api, totemBox, (objects) => this.links.highlightObjects(objects));
  }

  async start(): Promise<void> {
    const graph = await this.api.getGraph("corrected");
    await this.correction.init(graph.people);
    await this.refreshAnalytics();
    await this.ego.refresh();
  }

  /** Re-fetch everything that depends on verdicts or labels. */
  async refreshAnalytics(): Promise<void> {
    await Promise.all([
      this.refreshCoverage(),
      this.distribution.refresh(),
      this.matrix.refresh(),
      this.links.refresh(),
      this.state.focusObject ? this.ego.refresh() : Promise.resolve(),
    ]);
  }

  private async refreshCoverage(): Promise<void> {
    const cov = await this.api.getCoverage();
    this.coverageBox.textContent =
      `detector covers ${cov.classes_detected}/${cov.classes_total} classes; ` +
      `${cov.missed_pairs}/${cov.truth_pairs} corrected pairs missed` +
      (cov.empty_truth ? " (no corrections yet)" : ` (${(cov.missed_fraction * 100).toFixed(0)}%)`);
  }
}
