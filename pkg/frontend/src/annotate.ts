// Annotation task state: tracks the three required judgments
// (sentiment, intent leaf, retraction mention) and gates submission
// until all are set. The controller never sends a partial annotation.

import { ApiClient, OfflineQueue } from "./api.js";
import { TreeWizard } from "./tree.js";
import type { AnnotationRecord, Citation, DecisionTreeConfig, Sentiment } from "./types.js";

export const SENTIMENTS: Sentiment[] = ["positive", "negative", "neutral"];

export class AnnotationTask {
  citation: Citation;
  wizard: TreeWizard;
  sentiment: Sentiment | null = null;
  mentionsRetraction: boolean | null = null;

  constructor(citation: Citation, tree: DecisionTreeConfig) {
    this.citation = citation;
    this.wizard = new TreeWizard(tree);
  }

  get intent(): string | null {
    return this.wizard.state().intent;
  }

  /** Submit is allowed only when sentiment, a tree leaf, and the
   * mention flag are all set. */
  canSubmit(): boolean {
    return (
      this.sentiment !== null &&
      this.intent !== null &&
      this.mentionsRetraction !== null
    );
  }

  missing(): string[] {
    const out: string[] = [];
    if (this.sentiment === null) out.push("sentiment");
    if (this.intent === null) out.push("intent");
    if (this.mentionsRetraction === null) out.push("retraction mention");
    return out;
  }

  body(annotator: string) {
    if (!this.canSubmit()) {
      throw new Error(`annotation incomplete: missing ${this.missing().join(", ")}`);
    }
    return {
      sentiment: this.sentiment as string,
      intent: this.intent as string,
      mentions_retraction: this.mentionsRetraction as boolean,
      annotator,
    };
  }
}

export class AnnotationFlow {
  private client: ApiClient;
  private queue: OfflineQueue;
  private tree: DecisionTreeConfig | null = null;
  annotator: string;
  pendingIds: string[] = [];
  current: AnnotationTask | null = null;
  submitted: AnnotationRecord[] = [];

  constructor(client: ApiClient, annotator = "workbench") {
    this.client = client;
    this.queue = new OfflineQueue(client);
    this.annotator = annotator;
  }

  get offlineCount(): number {
    return this.queue.pending.length;
  }

  async start(): Promise<AnnotationTask | null> {
    this.tree = await this.client.decisionTree();
    this.pendingIds = (await this.client.queue()).pending;
    return this.advance();
  }

  async advance(): Promise<AnnotationTask | null> {
    const nextId = this.pendingIds.shift();
    if (nextId === undefined) {
      this.current = null;
      return null;
    }
    const response = await this.client.citation(nextId);
    this.current = new AnnotationTask(response.citation, this.tree!);
    return this.current;
  }

  /** Submit the current task; returns the next task (or null when the
   * queue is drained). Incomplete tasks throw and stay current. */
  async submitAndAdvance(): Promise<AnnotationTask | null> {
    if (!this.current) throw new Error("no active task");
    const body = this.current.body(this.annotator);
    const record = await this.queue.submit(this.current.citation.id, body);
    if (record) this.submitted.push(record);
    return this.advance();
  }

  async retryOffline(): Promise<number> {
    return this.queue.flush();
  }
}
