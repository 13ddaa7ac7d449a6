/**
 * Entry point: wires the queue view, IAA dashboard, and adjudication
 * workspace into the static page served by the annotation service.
 *
 * Configuration comes from the page URL: ?annotator=ID&token=T&view=queue
 * (views: queue, iaa, adjudication). The API lives on the same origin.
 */

import { AdjudicationController } from "./adjudication";
import { ApiClient } from "./api";
import { diffWords, splitContext } from "./highlight";
import { formatMetric, IaaPoller } from "./iaa";
import { QueueController, QueueState } from "./queue";

function el(tag: string, className: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function renderChunk(container: HTMLElement, context: string, chunk: string, other: string): void {
  const segments = splitContext(context || chunk, chunk);
  container.append(el("span", "ctx", segments.before));
  const marked = el("span", "chunk", "");
  const [words] = diffWords(segments.chunk, other);
  for (const word of words) {
    marked.append(el("span", word.changed ? "word changed" : "word", word.text + " "));
  }
  container.append(marked);
  container.append(el("span", "ctx", segments.after));
}

function renderQueue(root: HTMLElement, controller: QueueController): void {
  const draw = (state: QueueState) => {
    root.replaceChildren();
    if (state.buffered > 0) {
      root.append(el("div", "banner", `${state.buffered} label(s) queued offline`));
    }
    if (state.phase === "loading") {
      root.append(el("p", "status", "loading next item"));
      return;
    }
    if (state.phase === "error") {
      root.append(el("p", "status error", state.message));
      return;
    }
    if (state.phase === "done") {
      root.append(el("h2", "status", "queue complete, thank you"));
      return;
    }
    const item = state.item;
    if (item === null) return;
    root.append(el("div", "remaining", `${state.remaining} item(s) remaining`));
    root.append(el("span", "badge mode", item.mode));
    for (const source of controller.visibleSources()) {
      root.append(el("span", "badge source", source));
    }
    const pane1 = el("div", "pane", "");
    const pane2 = el("div", "pane", "");
    renderChunk(pane1, item.context1, item.doc1_chunk, item.doc2_chunk);
    renderChunk(pane2, item.context2, item.doc2_chunk, item.doc1_chunk);
    root.append(pane1, pane2);
    if (state.phase === "labeling") {
      const yes = el("button", "label-yes", "contradiction [1]");
      const no = el("button", "label-no", "not a contradiction [0]");
      yes.addEventListener("click", () => void controller.label(1));
      no.addEventListener("click", () => void controller.label(0));
      root.append(yes, no);
      if (state.message) root.append(el("p", "status", state.message));
    } else if (state.phase === "revealed") {
      root.append(el("p", "status", `labeled ${state.submittedLabel}; press any key for next`));
      const next = el("button", "next", "next item");
      next.addEventListener("click", () => void controller.next());
      root.append(next);
    }
  };
  controller.subscribe(draw);
  document.addEventListener("keydown", (event) => void controller.onKey(event.key));
  void controller.load();
}

function renderIaa(root: HTMLElement, poller: IaaPoller): void {
  poller.subscribe((snapshot) => {
    root.replaceChildren();
    if (snapshot.status === "unreachable") {
      root.append(el("div", "banner error", `service unreachable: ${snapshot.message}`));
    }
    if (snapshot.report === null || snapshot.status === "empty") {
      root.append(el("p", "status", snapshot.message || "no co-labeled items"));
      return;
    }
    const r = snapshot.report;
    root.append(el("div", "metric", `items: ${r.n_items}  annotators: ${r.n_annotators}`));
    root.append(
      el("div", "metric", `percent agreement: ${formatMetric(r.percent_agreement, "percent_agreement", r.reasons)}`),
      el("div", "metric", `cohen kappa: ${formatMetric(r.cohen_kappa, "cohen_kappa", r.reasons)}`),
      el("div", "metric", `krippendorff alpha: ${formatMetric(r.kripp_alpha, "kripp_alpha", r.reasons)}`),
      el("div", "metric", `adjudication queue depth: ${snapshot.adjudicationDepth}`),
    );
  });
  poller.start();
}

function renderAdjudication(root: HTMLElement, controller: AdjudicationController): void {
  const draw = () => {
    const state = controller.getState();
    root.replaceChildren();
    if (state.phase === "forbidden") {
      root.append(el("p", "status error", "403: not authorized for adjudication"));
      return;
    }
    if (state.phase === "empty") {
      root.append(el("p", "status", "adjudication queue is empty"));
      return;
    }
    if (state.phase === "error") {
      root.append(el("p", "status error", state.message));
      return;
    }
    for (const entry of state.entries) {
      const row = el("div", "adjudication-row", "");
      row.append(el("div", "key", entry.item.key));
      row.append(el("div", "chunk", entry.item.doc1_chunk));
      row.append(el("div", "chunk", entry.item.doc2_chunk));
      const labels = Object.entries(entry.labels)
        .map(([who, value]) => `${who}: ${value}`)
        .join(", ");
      row.append(el("div", "labels", labels));
      const yes = el("button", "decide-yes", "contradiction");
      const no = el("button", "decide-no", "not a contradiction");
      yes.addEventListener("click", () => void controller.decide(entry.item.key, 1).then(draw));
      no.addEventListener("click", () => void controller.decide(entry.item.key, 0).then(draw));
      row.append(yes, no);
      root.append(row);
    }
  };
  void controller.refresh().then(draw);
}

export function boot(root: HTMLElement, location: Location): void {
  const params = new URLSearchParams(location.search);
  const client = new ApiClient({ token: params.get("token") ?? "" });
  const view = params.get("view") ?? "queue";
  const who = params.get("annotator") ?? "annotator-1";
  if (view === "iaa") {
    renderIaa(root, new IaaPoller(client));
  } else if (view === "adjudication") {
    renderAdjudication(root, new AdjudicationController(client, who));
  } else {
    renderQueue(root, new QueueController(client, who));
  }
}

const rootElement = typeof document !== "undefined" ? document.getElementById("app") : null;
if (rootElement) {
  boot(rootElement, window.location);
}
