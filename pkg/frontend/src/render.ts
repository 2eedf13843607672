// HTML renderers, one per panel. All are pure string builders so they can be
// unit-tested without a DOM; app.ts assigns their output to panel bodies.

import type {
  DigitalPayload,
  DocumentBody,
  StatementSection,
  TraceResponse,
} from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function placeholder(text: string): string {
  return `<p class="placeholder">${escapeHtml(text)}</p>`;
}

function formatScore(score: number): string {
  return Number.isFinite(score) ? score.toFixed(3) : String(score);
}

function renderDocument(doc: DocumentBody): string {
  const meta = Object.entries(doc.meta)
    .map(
      ([key, value]) =>
        `<tr><td>${escapeHtml(key)}</td><td>${escapeHtml(String(value))}</td></tr>`,
    )
    .join("");
  const metaTable = meta
    ? `<table class="meta">${meta}</table>`
    : placeholder("no meta fields");
  return (
    `<article class="document">` +
    `<h4>${escapeHtml(doc.title)} <code>${escapeHtml(doc.id)}</code></h4>` +
    `<p>${escapeHtml(doc.body)}</p>` +
    metaTable +
    `</article>`
  );
}

function renderSection(section: StatementSection, index: number): string {
  const head = `<h3>statement ${index}: ${escapeHtml(section.intent)}</h3>`;
  if (section.intent === "count") {
    return (
      `<section class="stmt">${head}` +
      `<p class="count">count: <strong>${escapeHtml(String(section.count ?? section.total))}</strong></p>` +
      `</section>`
    );
  }
  if (section.intent === "describe") {
    const body = section.document
      ? renderDocument(section.document)
      : placeholder("document missing");
    return `<section class="stmt">${head}${body}</section>`;
  }
  const hits = section.hits
    .map(
      (hit) =>
        `<li><span class="title">${escapeHtml(hit.title)}</span> ` +
        `<code>${escapeHtml(hit.id)}</code> ` +
        `<span class="score">${escapeHtml(formatScore(hit.score))}</span>` +
        `<p class="snippet">${escapeHtml(hit.snippet)}</p></li>`,
    )
    .join("");
  const list = hits
    ? `<ol class="hits">${hits}</ol>`
    : placeholder("no hits");
  return (
    `<section class="stmt">${head}` +
    `<p class="totals">total matched: ${section.total}, showing ${section.hits.length}</p>` +
    list +
    `</section>`
  );
}

export function renderResults(
  payload: DigitalPayload | null,
  naturalPreview: string | null,
): string {
  if (payload === null) return placeholder("run a query to see results");
  const sections = payload.statements
    .map((section, i) => renderSection(section, i))
    .join("");
  const preview =
    naturalPreview === null
      ? ""
      : `<div class="natural-preview"><h3>natural rendering</h3>` +
        `<pre>${escapeHtml(naturalPreview)}</pre></div>`;
  return sections + preview;
}

export function renderSql(payload: DigitalPayload | null): string {
  if (payload === null) return placeholder("no query yet");
  return payload.statements
    .map((s) => `<pre class="sql">${escapeHtml(s.sql)}</pre>`)
    .join("");
}

export function renderFrame(payload: DigitalPayload | null): string {
  if (payload === null) return placeholder("no query yet");
  return payload.statements
    .map((section, i) => {
      const q = section.query;
      const terms = q.subject_terms.length
        ? q.subject_terms
            .map((t) => `<span class="chip">${escapeHtml(t)}</span>`)
            .join(" ")
        : "<em>none</em>";
      const phrases = q.phrases.length
        ? q.phrases
            .map((g) => `<span class="chip phrase">"${escapeHtml(g.join(" "))}"</span>`)
            .join(" ")
        : "<em>none</em>";
      const constraints = q.constraints.length
        ? `<ul>${q.constraints
            .map(
              (c) =>
                `<li><code>${escapeHtml(c.field)} ${escapeHtml(c.op)} ${escapeHtml(
                  JSON.stringify(c.value),
                )}</code></li>`,
            )
            .join("")}</ul>`
        : "<em>none</em>";
      return (
        `<section class="stmt"><h3>statement ${i}</h3>` +
        `<dl><dt>intent</dt><dd>${escapeHtml(section.intent)}</dd>` +
        `<dt>terms</dt><dd>${terms}</dd>` +
        `<dt>phrases</dt><dd>${phrases}</dd>` +
        `<dt>constraints</dt><dd>${constraints}</dd></dl>` +
        `</section>`
      );
    })
    .join("");
}

export function renderParseTree(
  payload: DigitalPayload | null,
  trace: TraceResponse | null,
): string {
  if (payload === null) return placeholder("no query yet");
  const parsedSummaries =
    trace?.envelopes.filter((e) => e.stage === "Parsed").map((e) => e.summary) ??
    [];
  return payload.statements
    .map((section, i) => {
      const q = section.query;
      const parts: string[] = [];
      for (const term of q.subject_terms) {
        parts.push(`<li>term <code>${escapeHtml(term)}</code></li>`);
      }
      for (const group of q.phrases) {
        parts.push(`<li>phrase <code>"${escapeHtml(group.join(" "))}"</code></li>`);
      }
      for (const c of q.constraints) {
        parts.push(
          `<li>filter <code>${escapeHtml(c.field)} ${escapeHtml(c.op)} ` +
            `${escapeHtml(JSON.stringify(c.value))}</code></li>`,
        );
      }
      if (q.limit !== undefined) {
        parts.push(`<li>limit <code>${q.limit}</code></li>`);
      }
      if (q.sort !== undefined) {
        parts.push(
          `<li>sort <code>${escapeHtml(q.sort.field)} ${escapeHtml(q.sort.direction)}</code></li>`,
        );
      }
      const label = parsedSummaries[i]
        ? escapeHtml(parsedSummaries[i])
        : `statement ${i}: ${escapeHtml(section.intent)}`;
      return (
        `<section class="stmt"><h3>${label}</h3>` +
        `<ul class="tree">${parts.join("") || "<li><em>empty</em></li>"}</ul>` +
        `</section>`
      );
    })
    .join("");
}

export function renderTokens(trace: TraceResponse | null): string {
  if (trace === null) return placeholder("no trace yet");
  const lexStages = trace.envelopes.filter(
    (e) => e.stage === "Received" || e.stage === "Tokenized",
  );
  if (lexStages.length === 0) return placeholder("no lexer stages recorded");
  return (
    `<ul class="lex">` +
    lexStages
      .map(
        (e) =>
          `<li><strong>${escapeHtml(e.stage)}</strong> ${escapeHtml(e.summary)}</li>`,
      )
      .join("") +
    `</ul>`
  );
}

export function renderTrace(trace: TraceResponse | null): string {
  if (trace === null) return placeholder("no trace yet");
  const rows = trace.envelopes
    .map(
      (e) =>
        `<tr><td>${e.seq}</td><td>${escapeHtml(e.stage)}</td>` +
        `<td class="us">${e.elapsed_micros}&micro;s</td>` +
        `<td>${escapeHtml(e.summary)}</td></tr>`,
    )
    .join("");
  const outcome =
    trace.outcome.status === "ok"
      ? `<p class="outcome ok">ok</p>`
      : `<p class="outcome failed">failed at ${escapeHtml(trace.outcome.stage ?? "?")}: ` +
        `${escapeHtml(trace.outcome.message ?? "")}</p>`;
  return (
    `<table class="trace"><thead><tr><th>#</th><th>stage</th><th>&micro;s</th>` +
    `<th>summary</th></tr></thead><tbody>${rows}</tbody></table>` +
    outcome
  );
}

export interface ErrorView {
  stage: string;
  message: string;
  offset?: number | null;
}

/**
 * Render a rejected query: the failing stage, the message, and the input
 * text with the character at the reported offset highlighted. An offset at
 * end-of-input gets an explicit end marker.
 */
export function renderError(text: string, error: ErrorView): string {
  const head =
    `<p class="error-head">rejected at <strong>${escapeHtml(error.stage)}</strong>: ` +
    `${escapeHtml(error.message)}</p>`;
  const offset = error.offset;
  if (offset === undefined || offset === null || offset < 0 || offset > text.length) {
    return head + `<pre class="error-input">${escapeHtml(text)}</pre>`;
  }
  const before = escapeHtml(text.slice(0, offset));
  const after = escapeHtml(text.slice(offset + 1));
  const at = offset < text.length ? escapeHtml(text[offset] ?? "") : "";
  const marked = at
    ? `<mark class="err-at">${at}</mark>`
    : `<mark class="err-at err-end">&#9166;</mark>`;
  return (
    head +
    `<pre class="error-input">${before}${marked}${after}</pre>` +
    `<p class="error-offset">offset ${offset}</p>`
  );
}
