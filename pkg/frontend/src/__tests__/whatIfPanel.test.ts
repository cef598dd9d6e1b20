import { beforeEach, describe, expect, it } from 'vitest';

import { draftHash } from '../draft';
import type { WhatIfPayload } from '../types';
import { renderValidationIssues, renderWhatIfPreview } from '../views/whatIfPanel';
import { fixture, regionalDraft } from './helpers';

let container: HTMLElement;

beforeEach(() => {
  container = document.createElement('div');
  document.body.replaceChildren(container);
});

describe('what-if preview', () => {
  it('reproduces the regional Level 1 -> Level 0 diff from the service', () => {
    const preview = fixture<WhatIfPayload>('whatif_regional.json');
    renderWhatIfPreview(container, preview, draftHash(regionalDraft()));
    const row = container.querySelector<HTMLElement>(
      '.diff-row[data-actor-id="one-nation-style-party"]',
    );
    expect(row).not.toBeNull();
    expect(row!.querySelector('.level-before')?.textContent).toBe('1');
    expect(row!.querySelector('.level-after')?.textContent).toBe('0');
    // Unchanged actors stay out of the diff table.
    expect(
      container.querySelector('.diff-row[data-actor-id="base-style-network"]'),
    ).toBeNull();
  });

  it('shows which cue weights changed, with service-computed values', () => {
    const preview = fixture<WhatIfPayload>('whatif_regional.json');
    renderWhatIfPreview(container, preview, 'abc');
    const items = [...container.querySelectorAll('.changed-cue')];
    expect(items.map((i) => (i as HTMLElement).dataset.cueId).sort()).toEqual(
      preview.changed_cues.map((c) => c.cue_id).sort(),
    );
    for (const cue of preview.changed_cues) {
      const item = container.querySelector(`[data-cue-id="${cue.cue_id}"]`);
      expect(item?.textContent).toContain(String(cue.effective_weight_before));
      expect(item?.textContent).toContain(String(cue.effective_weight_after));
    }
  });

  it('renders an empty diff for a zero-delta draft', () => {
    const preview = fixture<WhatIfPayload>('whatif_zero_delta.json');
    renderWhatIfPreview(container, preview, 'zzz');
    expect(container.querySelector('.empty-diff')).not.toBeNull();
    expect(container.querySelectorAll('.diff-row')).toHaveLength(0);
    expect(container.querySelectorAll('.changed-cue')).toHaveLength(0);
  });

  it('highlights floor suppressions instead of hiding them', () => {
    const preview = fixture<WhatIfPayload>('whatif_dehum_suppressed.json');
    renderWhatIfPreview(container, preview, 'sup');
    const notice = container.querySelector('.suppression-notice');
    expect(notice).not.toBeNull();
    const suppressed = container.querySelector<HTMLElement>(
      '.suppression-event[data-cue-id="l2-beh-dehumanizing-coded"]',
    );
    expect(suppressed?.textContent).toContain('0');
    // The floored cue's effective weight did not change.
    expect(
      [...container.querySelectorAll('.changed-cue')].every(
        (n) => (n as HTMLElement).dataset.cueId !== 'l2-beh-dehumanizing-coded',
      ),
    ).toBe(true);
  });

  it('labels the preview with the draft hash it answers', () => {
    const preview = fixture<WhatIfPayload>('whatif_regional.json');
    const key = draftHash(regionalDraft());
    renderWhatIfPreview(container, preview, key);
    const section = container.querySelector<HTMLElement>('.whatif-preview');
    expect(section?.dataset.draftHash).toBe(key);
    expect(section?.querySelector('h3')?.textContent).toContain(key);
  });
});

describe('draft validation messages', () => {
  it('renders inline issues and clears them when resolved', () => {
    renderValidationIssues(container, [
      { field: 'cue_multipliers.x', message: 'needs a reason' },
    ]);
    expect(container.querySelectorAll('.validation-issue')).toHaveLength(1);
    renderValidationIssues(container, []);
    expect(container.querySelectorAll('.validation-issue')).toHaveLength(0);
  });
});
