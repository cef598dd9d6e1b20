/**
 * Client-side policy draft state.
 *
 * Drafts live entirely in the browser until an explicit commit; previews
 * are keyed by a stable hash of the draft so a panel always says exactly
 * which draft it answers. Validation mirrors the server's hard rules
 * (reasons for every non-default entry) so obviously broken drafts are
 * blocked before any network call.
 */

import type { PolicyDraft, WhatIfPayload } from './types';

export function emptyDraft(region: string, baseVersion: string): PolicyDraft {
  return {
    schema_version: '1',
    region,
    version: `${baseVersion}-draft`,
    author: '',
    rationale: '',
    cue_multipliers: {},
    dehumanization_floor: true,
    serial_N: 3,
    serial_D: 2,
    exemptions: [],
    thresholds_override: null,
  };
}

/** Deterministic JSON with sorted keys, matching the server's canonical form. */
export function stableStringify(value: unknown): string {
  if (value === null || typeof value !== 'object') {
    return JSON.stringify(value);
  }
  if (Array.isArray(value)) {
    return `[${value.map(stableStringify).join(',')}]`;
  }
  const entries = Object.entries(value as Record<string, unknown>)
    .sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0))
    .map(([k, v]) => `${JSON.stringify(k)}:${stableStringify(v)}`);
  return `{${entries.join(',')}}`;
}

/** FNV-1a over the canonical draft text; short, stable, good enough to
 * label previews. */
export function draftHash(draft: PolicyDraft): string {
  const text = stableStringify(draft);
  let hash = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    hash ^= text.charCodeAt(i);
    hash = Math.imul(hash, 0x01000193) >>> 0;
  }
  return hash.toString(16).padStart(8, '0');
}

export interface ValidationIssue {
  field: string;
  message: string;
}

/** Mirror of the server-side hard rules; commit and what-if both gate on
 * an empty issue list. */
export function validateDraft(draft: PolicyDraft, forCommit: boolean): ValidationIssue[] {
  const issues: ValidationIssue[] = [];
  if (!draft.rationale.trim()) {
    issues.push({ field: 'rationale', message: 'rationale is required' });
  }
  if (forCommit && !draft.author.trim()) {
    issues.push({ field: 'author', message: 'author is required' });
  }
  if (!draft.version.trim()) {
    issues.push({ field: 'version', message: 'version is required' });
  }
  for (const [cueId, entry] of Object.entries(draft.cue_multipliers)) {
    if (entry.multiplier < 0) {
      issues.push({
        field: `cue_multipliers.${cueId}`,
        message: 'multiplier must be nonnegative',
      });
    }
    if (entry.multiplier !== 1.0 && !entry.reason.trim()) {
      issues.push({
        field: `cue_multipliers.${cueId}`,
        message: `multiplier ${entry.multiplier} on ${cueId} needs a reason`,
      });
    }
  }
  for (const exemption of draft.exemptions) {
    if (!exemption.reason.trim()) {
      issues.push({
        field: `exemptions.${exemption.actor_id}`,
        message: `exemption for ${exemption.actor_id} needs a reason`,
      });
    }
  }
  return issues;
}

/**
 * Session-local cache of previews keyed by draft hash, so iterating on a
 * draft reuses answers and every rendered preview names the draft state
 * it belongs to.
 */
export class PreviewCache {
  private previews = new Map<string, WhatIfPayload>();

  key(draft: PolicyDraft): string {
    return draftHash(draft);
  }

  get(draft: PolicyDraft): WhatIfPayload | undefined {
    return this.previews.get(this.key(draft));
  }

  put(draft: PolicyDraft, payload: WhatIfPayload): string {
    const key = this.key(draft);
    this.previews.set(key, payload);
    return key;
  }

  clear(): void {
    this.previews.clear();
  }
}
