/**
 * What-if panel: preview a draft policy's effect before committing.
 *
 * The diff is rendered exactly as the service computed it: per-actor
 * computed/effective level before and after, the cues whose effective
 * weights changed, and any dehumanization-floor suppressions, which are
 * highlighted rather than hidden. The panel header names the draft hash
 * the preview answers, so a stale preview can never masquerade as the
 * current draft's.
 */

import type { ValidationIssue } from '../draft';
import type { WhatIfPayload } from '../types';

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderValidationIssues(
  container: HTMLElement,
  issues: ValidationIssue[],
): void {
  container.replaceChildren();
  if (issues.length === 0) return;
  const list = el('ul', 'validation-issues');
  for (const issue of issues) {
    const item = el('li', 'validation-issue', `${issue.field}: ${issue.message}`);
    item.dataset.field = issue.field;
    list.append(item);
  }
  container.append(list);
}

export function renderWhatIfPreview(
  container: HTMLElement,
  preview: WhatIfPayload,
  draftHashKey: string,
): void {
  container.replaceChildren();
  const section = el('section', 'whatif-preview');
  section.dataset.draftHash = draftHashKey;
  section.append(
    el(
      'h3',
      undefined,
      `Preview for draft ${preview.candidate_policy_version} [${draftHashKey}] ` +
        `vs active ${preview.active_policy_version}`,
    ),
  );

  const changed = preview.actors.filter((a) => a.changed);
  if (changed.length === 0) {
    section.append(el('p', 'empty-diff', 'No classification changes.'));
  } else {
    const table = el('table', 'diff-table');
    const head = el('tr');
    ['actor', 'computed before', 'computed after', 'effective before', 'effective after'].forEach(
      (h) => head.append(el('th', undefined, h)),
    );
    table.append(head);
    for (const diff of changed) {
      const row = el('tr', 'diff-row');
      row.dataset.actorId = diff.actor_id;
      row.append(
        el('td', undefined, diff.actor_id),
        el('td', 'level-before', String(diff.computed_level_before)),
        el('td', 'level-after', String(diff.computed_level_after)),
        el('td', undefined, String(diff.effective_level_before)),
        el('td', undefined, String(diff.effective_level_after)),
      );
      table.append(row);
    }
    section.append(table);
  }

  if (preview.changed_cues.length > 0) {
    const list = el('ul', 'changed-cues');
    for (const cue of preview.changed_cues) {
      const item = el(
        'li',
        'changed-cue',
        `${cue.cue_id}: effective weight ` +
          `${String(cue.effective_weight_before)} -> ${String(cue.effective_weight_after)}`,
      );
      item.dataset.cueId = cue.cue_id;
      list.append(item);
    }
    section.append(el('h4', undefined, 'Changed cue weights'), list);
  }

  if (preview.suppression_events.length > 0) {
    const notice = el('div', 'suppression-notice');
    notice.setAttribute('role', 'alert');
    notice.append(
      el(
        'p',
        undefined,
        'Dehumanization floor active: the following requested downweighs had no effect.',
      ),
    );
    const list = el('ul');
    for (const event of preview.suppression_events) {
      const item = el(
        'li',
        'suppression-event',
        `${event.cue_id}: requested ${String(event.requested_multiplier)} (${event.reason})`,
      );
      item.dataset.cueId = event.cue_id;
      list.append(item);
    }
    notice.append(list);
    section.append(notice);
  }

  container.append(section);
}
