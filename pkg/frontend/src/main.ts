// Workbench entry point: wires the annotation flow and the topic
// explorer to the DOM. Keyboard-first: digits pick wizard options,
// p/n/u set sentiment, y/x set the retraction-mention flag, Enter
// submits, Backspace steps the wizard back.

import { AnnotationFlow, SENTIMENTS } from "./annotate.js";
import { ApiClient, ApiValidationError } from "./api.js";
import { fifthHistogram, groupedStackChart, topicColor, topicMapChart } from "./charts.js";
import { ExplorerState } from "./explorer.js";

const client = new ApiClient("");
const flow = new AnnotationFlow(client);
const explorer = new ExplorerState();

function byId<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function setStatus(message: string, kind: "info" | "error" = "info"): void {
  const node = byId<HTMLDivElement>("status");
  node.textContent = message;
  node.className = `status ${kind}`;
}

// ---------------------------------------------------------------------------
// Annotation view
// ---------------------------------------------------------------------------

function highlightPointer(sentence: string, pointer: string): HTMLElement {
  const span = document.createElement("span");
  const idx = sentence.indexOf(pointer);
  if (idx < 0) {
    span.textContent = sentence;
    return span;
  }
  span.append(sentence.slice(0, idx));
  const mark = document.createElement("mark");
  mark.textContent = pointer;
  span.appendChild(mark);
  span.append(sentence.slice(idx + pointer.length));
  return span;
}

function renderTask(): void {
  const task = flow.current;
  const container = byId<HTMLDivElement>("task");
  container.innerHTML = "";
  byId<HTMLSpanElement>("queue-count").textContent = String(
    flow.pendingIds.length + (task ? 1 : 0),
  );
  byId<HTMLSpanElement>("offline-count").textContent =
    flow.offlineCount > 0 ? `${flow.offlineCount} queued offline` : "";
  if (!task) {
    container.innerHTML = "<p class='done'>Queue drained. Every citation is annotated.</p>";
    return;
  }
  const cite = task.citation;

  const head = document.createElement("p");
  head.className = "task-head";
  head.textContent =
    `${cite.id} — ${cite.citing_entity_id} cites ${cite.cited_item_id} ` +
    `(section: ${cite.section.replace(/_/g, " ")})`;
  container.appendChild(head);

  const ctx = document.createElement("blockquote");
  ctx.className = "context";
  for (const [part, cls] of [
    [cite.context.preceding, "neighbor"],
    [cite.context.anchor, "anchor"],
    [cite.context.following, "neighbor"],
  ] as const) {
    if (!part) continue;
    const p = document.createElement("p");
    p.className = cls;
    p.appendChild(
      cls === "anchor"
        ? highlightPointer(part, cite.pointer_text)
        : document.createTextNode(part),
    );
    ctx.appendChild(p);
  }
  container.appendChild(ctx);

  // guide sentence preview
  const guide = task.wizard.renderedGuide();
  if (guide) {
    const g = document.createElement("p");
    g.className = "guide";
    g.textContent = `“${guide}”`;
    container.appendChild(g);
  }

  // wizard question
  const state = task.wizard.state();
  const wizardBox = document.createElement("div");
  wizardBox.className = "wizard";
  if (!state.complete) {
    const q = document.createElement("p");
    q.textContent = `Choose ${state.question?.replace(/_/g, " ")}:`;
    wizardBox.appendChild(q);
    state.options.forEach((option, i) => {
      const button = document.createElement("button");
      button.textContent = `${i + 1}. ${task.wizard.optionLabel(option)}`;
      button.addEventListener("click", () => {
        task.wizard.choose(option);
        renderTask();
      });
      wizardBox.appendChild(button);
    });
  } else {
    const leaf = document.createElement("p");
    leaf.className = "leaf";
    leaf.textContent = `intent: ${state.intent?.replace(/_/g, " ")}`;
    wizardBox.appendChild(leaf);
  }
  if (task.wizard.path.length > 0) {
    const back = document.createElement("button");
    back.className = "back";
    back.textContent = "← back";
    back.addEventListener("click", () => {
      task.wizard.back();
      renderTask();
    });
    wizardBox.appendChild(back);
  }
  container.appendChild(wizardBox);

  // sentiment + mention controls
  const controls = document.createElement("div");
  controls.className = "controls";
  const sentimentBox = document.createElement("div");
  sentimentBox.append("sentiment: ");
  SENTIMENTS.forEach((s) => {
    const button = document.createElement("button");
    button.textContent = s;
    button.className = task.sentiment === s ? "selected" : "";
    button.addEventListener("click", () => {
      task.sentiment = s;
      renderTask();
    });
    sentimentBox.appendChild(button);
  });
  controls.appendChild(sentimentBox);
  const mentionBox = document.createElement("div");
  mentionBox.append("mentions retraction: ");
  for (const value of [true, false]) {
    const button = document.createElement("button");
    button.textContent = value ? "yes" : "no";
    button.className = task.mentionsRetraction === value ? "selected" : "";
    button.addEventListener("click", () => {
      task.mentionsRetraction = value;
      renderTask();
    });
    mentionBox.appendChild(button);
  }
  controls.appendChild(mentionBox);
  container.appendChild(controls);

  const submit = document.createElement("button");
  submit.id = "submit";
  submit.textContent = "submit (Enter)";
  submit.disabled = !task.canSubmit();
  if (!task.canSubmit()) {
    submit.title = `missing: ${task.missing().join(", ")}`;
  }
  submit.addEventListener("click", () => void submitCurrent());
  container.appendChild(submit);
}

async function submitCurrent(): Promise<void> {
  const task = flow.current;
  if (!task || !task.canSubmit()) {
    setStatus(`cannot submit: missing ${task?.missing().join(", ") ?? "task"}`, "error");
    return;
  }
  try {
    await flow.submitAndAdvance();
    if (flow.offlineCount > 0) {
      setStatus(`offline: ${flow.offlineCount} annotation(s) queued for retry`, "error");
    } else {
      setStatus("annotation saved");
    }
  } catch (err) {
    if (err instanceof ApiValidationError) {
      setStatus(`rejected by server: ${JSON.stringify(err.details)}`, "error");
    } else {
      setStatus(String(err), "error");
    }
  }
  renderTask();
}

function bindKeys(): void {
  document.addEventListener("keydown", (event) => {
    if (byId<HTMLDivElement>("annotate-view").hidden) return;
    const task = flow.current;
    if (!task) return;
    if (event.key >= "1" && event.key <= "9") {
      const state = task.wizard.state();
      const index = Number(event.key) - 1;
      if (!state.complete && index < state.options.length) {
        task.wizard.choose(state.options[index]);
        renderTask();
      }
    } else if (event.key === "Backspace") {
      event.preventDefault();
      task.wizard.back();
      renderTask();
    } else if (event.key === "p") {
      task.sentiment = "positive";
      renderTask();
    } else if (event.key === "n") {
      task.sentiment = "negative";
      renderTask();
    } else if (event.key === "u") {
      task.sentiment = "neutral";
      renderTask();
    } else if (event.key === "y") {
      task.mentionsRetraction = true;
      renderTask();
    } else if (event.key === "x") {
      task.mentionsRetraction = false;
      renderTask();
    } else if (event.key === "Enter") {
      void submitCurrent();
    }
  });
}

// ---------------------------------------------------------------------------
// Explorer view
// ---------------------------------------------------------------------------

async function loadExplorer(): Promise<void> {
  const picker = byId<HTMLSelectElement>("bundle-picker");
  try {
    const { bundles } = await client.listBundles();
    const visBundles = bundles.filter((b) => b.includes("vis_bundle"));
    picker.innerHTML = "";
    for (const name of visBundles) {
      const option = document.createElement("option");
      option.value = name;
      option.textContent = name;
      picker.appendChild(option);
    }
    if (visBundles.length === 0) {
      byId<HTMLDivElement>("explorer-body").textContent =
        "No visualization bundles exported yet (run the export stage).";
      return;
    }
    await explorer.load(client, visBundles[0]);
    renderExplorer();
  } catch (err) {
    byId<HTMLDivElement>("explorer-body").textContent = `failed to load bundles: ${err}`;
  }
}

function renderExplorer(): void {
  const bundle = explorer.bundle;
  if (!bundle) return;
  const lamLabel = byId<HTMLSpanElement>("lambda-value");
  lamLabel.textContent = explorer.lambda.toFixed(2);

  const mapBox = byId<HTMLDivElement>("topic-map");
  mapBox.innerHTML = "";
  mapBox.appendChild(
    topicMapChart(bundle.topic_map, explorer.selectedTopic, (topic) => {
      explorer.selectedTopic = topic;
      renderExplorer();
    }),
  );

  const termBox = byId<HTMLDivElement>("terms");
  termBox.innerHTML = "";
  const heading = document.createElement("h3");
  heading.textContent = `topic ${explorer.selectedTopic + 1} — top terms`;
  heading.style.color = topicColor(explorer.selectedTopic);
  termBox.appendChild(heading);
  const ranked = explorer.terms();
  const maxRel = ranked[0]?.relevance ?? 1;
  const minRel = ranked[ranked.length - 1]?.relevance ?? 0;
  const list = document.createElement("ol");
  for (const { term, relevance } of ranked) {
    const item = document.createElement("li");
    const bar = document.createElement("span");
    bar.className = "term-bar";
    const widthPct = maxRel === minRel ? 100 : (100 * (relevance - minRel)) / (maxRel - minRel);
    bar.style.width = `${Math.max(widthPct, 2)}%`;
    bar.style.background = topicColor(explorer.selectedTopic);
    const label = document.createElement("span");
    label.textContent = ` ${term}`;
    item.appendChild(bar);
    item.appendChild(label);
    list.appendChild(item);
  }
  termBox.appendChild(list);

  const groupedBox = byId<HTMLDivElement>("grouped");
  groupedBox.innerHTML = "";
  const table = bundle.grouped[explorer.groupKey];
  if (table) {
    const order = explorer.groupKey === "period" ? ["P_PRE", "P_RET", "P_POST"] : null;
    groupedBox.appendChild(groupedStackChart(table, order));
  }
}

async function loadFifths(): Promise<void> {
  const box = byId<HTMLDivElement>("fifths");
  try {
    const report = await client.bundle<{ fifth_histograms: never }>("report.json");
    const fifths = report["fifth_histograms"];
    if (fifths) {
      box.innerHTML = "";
      box.appendChild(fifthHistogram(fifths));
    }
  } catch {
    box.textContent = "report.json not exported; fifth histogram unavailable.";
  }
}

// ---------------------------------------------------------------------------
// Boot
// ---------------------------------------------------------------------------

function showTab(tab: "annotate" | "explore"): void {
  byId<HTMLDivElement>("annotate-view").hidden = tab !== "annotate";
  byId<HTMLDivElement>("explore-view").hidden = tab !== "explore";
  byId<HTMLButtonElement>("tab-annotate").classList.toggle("active", tab === "annotate");
  byId<HTMLButtonElement>("tab-explore").classList.toggle("active", tab === "explore");
}

async function boot(): Promise<void> {
  byId<HTMLButtonElement>("tab-annotate").addEventListener("click", () => showTab("annotate"));
  byId<HTMLButtonElement>("tab-explore").addEventListener("click", () => showTab("explore"));
  byId<HTMLInputElement>("lambda-slider").addEventListener("input", (event) => {
    explorer.setLambda(Number((event.target as HTMLInputElement).value));
    renderExplorer();
  });
  byId<HTMLSelectElement>("bundle-picker").addEventListener("change", async (event) => {
    await explorer.load(client, (event.target as HTMLSelectElement).value);
    renderExplorer();
  });
  byId<HTMLSelectElement>("group-picker").addEventListener("change", (event) => {
    explorer.groupKey = (event.target as HTMLSelectElement).value;
    renderExplorer();
  });
  byId<HTMLButtonElement>("retry-offline").addEventListener("click", async () => {
    const flushed = await flow.retryOffline();
    setStatus(`retried: ${flushed} annotation(s) delivered`);
    renderTask();
  });
  bindKeys();
  showTab("annotate");
  if (!(await client.health())) {
    setStatus("annotation API unreachable; is `retrace annotate serve` running?", "error");
    return;
  }
  try {
    await flow.start();
    renderTask();
  } catch (err) {
    setStatus(`failed to load queue: ${err}`, "error");
  }
  await loadExplorer();
  await loadFifths();
}

void boot();
