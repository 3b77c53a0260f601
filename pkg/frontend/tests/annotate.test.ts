// Submission gating and the offline retry queue. The fetch layer is
// faked; no server involved.

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { AnnotationTask } from "../src/annotate.js";
import { ApiClient, ApiValidationError, OfflineQueue } from "../src/api.js";
import type { Citation, DecisionTreeConfig } from "../src/types.js";

const here = dirname(fileURLToPath(import.meta.url));
const tree: DecisionTreeConfig = JSON.parse(
  readFileSync(
    join(here, "..", "..", "src", "retrace", "data", "cito_decision_tree.json"),
    "utf-8",
  ),
);

const REVIEWING = "Reviewing and eventually giving an opinion on the cited entity";

function makeCitation(): Citation {
  return {
    id: "ctx-001",
    citing_entity_id: "10.8000/c01",
    cited_item_id: "ret-01",
    pointer_text: "[1]",
    section: "introduction",
    context: { preceding: null, anchor: "Claim [1] here.", following: null },
    sentiment: null,
    intent: null,
    mentions_retraction: null,
  };
}

function completeTask(): AnnotationTask {
  const task = new AnnotationTask(makeCitation(), tree);
  for (const step of [REVIEWING, "Inconsistent with", "10", "0.4"]) {
    task.wizard.choose(step);
  }
  task.sentiment = "negative";
  task.mentionsRetraction = true;
  return task;
}

describe("submission gating", () => {
  it("blocks until sentiment, leaf and mention flag are all set", () => {
    const task = new AnnotationTask(makeCitation(), tree);
    expect(task.canSubmit()).toBe(false);
    expect(task.missing()).toEqual(["sentiment", "intent", "retraction mention"]);
    task.sentiment = "neutral";
    expect(task.canSubmit()).toBe(false);
    for (const step of [REVIEWING, "Talking about", "40", "0.1"]) task.wizard.choose(step);
    expect(task.canSubmit()).toBe(false);
    task.mentionsRetraction = false;
    expect(task.canSubmit()).toBe(true);
    expect(task.body("ann")).toEqual({
      sentiment: "neutral",
      intent: "discusses",
      mentions_retraction: false,
      annotator: "ann",
    });
  });

  it("a partial wizard path is not a leaf", () => {
    const task = new AnnotationTask(makeCitation(), tree);
    task.wizard.choose(REVIEWING);
    task.wizard.choose("Inconsistent with");
    expect(task.intent).toBeNull();
    expect(() => task.body("ann")).toThrow(/incomplete/);
  });
});

function fakeFetch(handler: (url: string, init?: RequestInit) => Response | Error) {
  return async (url: string, init?: RequestInit): Promise<Response> => {
    const result = handler(url, init);
    if (result instanceof Error) throw result;
    return result;
  };
}

function okJson(body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status: 200,
    headers: { "Content-Type": "application/json" },
  });
}

describe("offline queue", () => {
  it("queues on network failure and flushes later, preserving order", async () => {
    let online = false;
    const delivered: string[] = [];
    const client = new ApiClient("http://test", fakeFetch((url) => {
      if (!online) return new TypeError("network down");
      delivered.push(url);
      return okJson({ record: { seq: delivered.length } });
    }));
    const queue = new OfflineQueue(client);
    const body = completeTask().body("ann");
    expect(await queue.submit("c1", body)).toBeNull();
    expect(await queue.submit("c2", body)).toBeNull();
    expect(queue.pending.length).toBe(2);
    online = true;
    expect(await queue.flush()).toBe(2);
    expect(queue.pending.length).toBe(0);
    expect(delivered[0]).toContain("/api/citations/c1/");
    expect(delivered[1]).toContain("/api/citations/c2/");
  });

  it("never queues validation rejections", async () => {
    const client = new ApiClient("http://test", fakeFetch(() =>
      new Response(JSON.stringify({ detail: [{ msg: "invalid sentiment" }] }), {
        status: 422,
        headers: { "Content-Type": "application/json" },
      })));
    const queue = new OfflineQueue(client);
    const body = completeTask().body("ann");
    await expect(queue.submit("c1", body)).rejects.toBeInstanceOf(ApiValidationError);
    expect(queue.pending.length).toBe(0);
  });

  it("stops flushing at the first network failure", async () => {
    let calls = 0;
    const client = new ApiClient("http://test", fakeFetch(() => {
      calls += 1;
      return calls > 1 ? new TypeError("down again") : okJson({ record: { seq: 1 } });
    }));
    const queue = new OfflineQueue(client);
    queue.pending.push(
      { citationId: "c1", body: completeTask().body("a") },
      { citationId: "c2", body: completeTask().body("a") },
    );
    expect(await queue.flush()).toBe(1);
    expect(queue.pending.map((p) => p.citationId)).toEqual(["c2"]);
  });
});
