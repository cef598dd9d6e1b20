/**
 * Commit flows: persisting a policy version (optionally carrying new
 * exemptions) through the service.
 *
 * The client blocks commits whose reasons or author are missing before
 * any network call; server-side rejections are surfaced verbatim. After a
 * successful commit the version-history list is refreshed, so the new
 * version is visible within one refresh.
 */

import { ApiClient, ServiceError } from '../api';
import { validateDraft } from '../draft';
import type { PoliciesPayload, PolicyDraft } from '../types';

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

export interface CommitOutcome {
  committed: string | null;
  blockedBy: string[];
  serverError: string | null;
}

/**
 * Validate client-side, then POST. Returns what happened; rendering is
 * separate so the flow is testable without a DOM.
 */
export async function commitPolicyFlow(
  api: ApiClient,
  draft: PolicyDraft,
): Promise<CommitOutcome> {
  const issues = validateDraft(draft, true);
  if (issues.length > 0) {
    return {
      committed: null,
      blockedBy: issues.map((i) => `${i.field}: ${i.message}`),
      serverError: null,
    };
  }
  try {
    const result = await api.commitPolicy(draft);
    return { committed: result.committed, blockedBy: [], serverError: null };
  } catch (err) {
    if (err instanceof ServiceError) {
      return { committed: null, blockedBy: [], serverError: err.detail };
    }
    throw err;
  }
}

export function renderCommitOutcome(container: HTMLElement, outcome: CommitOutcome): void {
  container.replaceChildren();
  if (outcome.committed) {
    const ok = el('div', 'banner banner-success');
    ok.dataset.version = outcome.committed;
    ok.textContent = `Committed policy version ${outcome.committed}.`;
    container.append(ok);
    return;
  }
  if (outcome.blockedBy.length > 0) {
    const blocked = el('div', 'banner banner-blocked');
    blocked.setAttribute('role', 'alert');
    blocked.append(el('p', undefined, 'Commit blocked:'));
    const list = el('ul');
    outcome.blockedBy.forEach((reason) => list.append(el('li', 'blocked-reason', reason)));
    blocked.append(list);
    container.append(blocked);
    return;
  }
  if (outcome.serverError) {
    const rejected = el('div', 'banner banner-error');
    rejected.setAttribute('role', 'alert');
    rejected.textContent = `Server rejected the commit: ${outcome.serverError}`;
    container.append(rejected);
  }
}

export function renderVersionHistory(
  container: HTMLElement,
  policies: PoliciesPayload,
): void {
  container.replaceChildren();
  const section = el('section', 'version-history');
  section.append(el('h3', undefined, 'Policy versions'));
  const list = el('ul');
  for (const version of policies.policy_versions) {
    const item = el('li', 'policy-version', version);
    item.dataset.version = version;
    if (version === policies.active) {
      item.classList.add('active');
      item.textContent = `${version} (active)`;
    }
    list.append(item);
  }
  if (policies.policy_versions.length === 0) {
    list.append(el('li', 'policy-version builtin', `${policies.active} (built-in default)`));
  }
  section.append(list);
  container.append(section);
}

/** Warn when the server's active policy moved under a live session. */
export function staleVersionWarning(
  sessionPolicyVersion: string,
  current: PoliciesPayload,
): string | null {
  if (current.active !== sessionPolicyVersion) {
    return (
      `The active policy changed from ${sessionPolicyVersion} to ${current.active} ` +
      'while this session was open; previews against the old version are stale.'
    );
  }
  return null;
}
