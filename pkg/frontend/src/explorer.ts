// Topic-explorer state: which bundle/model is loaded, the lambda
// slider value, the selected topic and grouping key. Re-ranking on
// lambda change is purely client-side.

import type { ApiClient } from "./api.js";
import { rankTerms, type RankedTerm } from "./relevance.js";
import type { VisBundle } from "./types.js";

export interface ExplorerFilters {
  subjectArea: string | null;
  discipline: string | null;
}

export class ExplorerState {
  bundle: VisBundle | null = null;
  bundleName: string | null = null;
  lambda = 0.3;
  selectedTopic = 0;
  groupKey = "period";
  filters: ExplorerFilters = { subjectArea: null, discipline: null };
  termLimit = 30;

  async load(client: ApiClient, name: string): Promise<void> {
    const bundle = await client.bundle(name);
    this.bundle = bundle;
    this.bundleName = name;
    this.lambda = bundle.default_lambda;
    this.selectedTopic = 0;
    const keys = Object.keys(bundle.grouped);
    if (keys.length > 0 && !keys.includes(this.groupKey)) this.groupKey = keys[0];
  }

  setLambda(value: number): void {
    if (value < 0 || value > 1) throw new Error("lambda out of range");
    this.lambda = value;
  }

  /** Ranked terms for the selected topic at the current lambda;
   * computed locally from phi and p(w). */
  terms(): RankedTerm[] {
    if (!this.bundle) return [];
    return rankTerms(
      this.bundle.phi[this.selectedTopic],
      this.bundle.p_w,
      this.bundle.vocabulary,
      this.lambda,
      this.termLimit,
    );
  }

  topicCount(): number {
    return this.bundle?.k ?? 0;
  }
}
