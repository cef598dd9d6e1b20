/**
 * Console shell: actor selection, profile views, what-if iteration, and
 * commit flows, wired to the live service.
 *
 * Single-user session model. The draft policy is held client-side only;
 * previews are cached by draft hash; commits refresh the version history
 * and re-check for staleness against the server's active policy.
 */

import { ApiClient, ServiceUnreachable } from './api';
import { PreviewCache, draftHash, emptyDraft, validateDraft } from './draft';
import type { PolicyDraft } from './types';
import {
  commitPolicyFlow,
  renderCommitOutcome,
  renderVersionHistory,
  staleVersionWarning,
} from './views/commitFlows';
import {
  renderHolisticGrid,
  renderLevelPrevalence,
  renderSeries,
  renderUnreachableBanner,
} from './views/profileViews';
import { renderValidationIssues, renderWhatIfPreview } from './views/whatIfPanel';

interface Panels {
  actorSelect: HTMLSelectElement;
  prevalence: HTMLElement;
  series: HTMLElement;
  holistic: HTMLElement;
  draftEditor: HTMLTextAreaElement;
  validation: HTMLElement;
  preview: HTMLElement;
  commitStatus: HTMLElement;
  versionHistory: HTMLElement;
  staleWarning: HTMLElement;
}

export class ConsoleApp {
  private draft: PolicyDraft;
  private previews = new PreviewCache();
  private sessionPolicyVersion = '';

  constructor(
    private api: ApiClient,
    private panels: Panels,
  ) {
    this.draft = emptyDraft('GLOBAL', 'session');
  }

  async start(): Promise<void> {
    try {
      const [actors, policies] = await Promise.all([
        this.api.actors(),
        this.api.policies(),
      ]);
      this.sessionPolicyVersion = policies.active;
      renderVersionHistory(this.panels.versionHistory, policies);
      this.panels.actorSelect.replaceChildren(
        ...actors.actors.map((actor) => {
          const option = document.createElement('option');
          option.value = actor.id;
          option.textContent = `${actor.display_name} (${actor.region})`;
          return option;
        }),
      );
      if (actors.actors.length > 0) {
        await this.showActor(actors.actors[0].id);
      }
    } catch (err) {
      if (err instanceof ServiceUnreachable) {
        renderUnreachableBanner(this.panels.prevalence, err.message);
        return;
      }
      throw err;
    }
    this.panels.actorSelect.addEventListener('change', () => {
      void this.showActor(this.panels.actorSelect.value);
    });
    this.panels.draftEditor.value = JSON.stringify(this.draft, null, 2);
  }

  async showActor(actorId: string): Promise<void> {
    try {
      const [profile, series, holistic] = await Promise.all([
        this.api.profile(actorId),
        this.api.series(actorId, 7),
        this.api.holistic(actorId),
      ]);
      renderLevelPrevalence(this.panels.prevalence, profile);
      renderSeries(this.panels.series, series);
      renderHolisticGrid(this.panels.holistic, holistic);
    } catch (err) {
      if (err instanceof ServiceUnreachable) {
        renderUnreachableBanner(this.panels.prevalence, err.message);
        return;
      }
      throw err;
    }
  }

  readDraft(): PolicyDraft | null {
    try {
      this.draft = JSON.parse(this.panels.draftEditor.value) as PolicyDraft;
      return this.draft;
    } catch {
      renderValidationIssues(this.panels.validation, [
        { field: 'draft', message: 'draft is not valid JSON' },
      ]);
      return null;
    }
  }

  /** Run (or reuse) a preview for the current draft; never persists. */
  async previewDraft(): Promise<void> {
    const draft = this.readDraft();
    if (draft === null) return;
    const issues = validateDraft(draft, false);
    renderValidationIssues(this.panels.validation, issues);
    if (issues.length > 0) return;

    const cached = this.previews.get(draft);
    if (cached) {
      renderWhatIfPreview(this.panels.preview, cached, draftHash(draft));
      return;
    }
    const payload = await this.api.whatIf(draft);
    const key = this.previews.put(draft, payload);
    renderWhatIfPreview(this.panels.preview, payload, key);
  }

  async commitDraft(): Promise<void> {
    const draft = this.readDraft();
    if (draft === null) return;
    const outcome = await commitPolicyFlow(this.api, draft);
    renderCommitOutcome(this.panels.commitStatus, outcome);
    if (outcome.committed) {
      const policies = await this.api.policies();
      renderVersionHistory(this.panels.versionHistory, policies);
      this.sessionPolicyVersion = policies.active;
      this.previews.clear();
    }
  }

  async checkStaleness(): Promise<void> {
    const policies = await this.api.policies();
    const warning = staleVersionWarning(this.sessionPolicyVersion, policies);
    this.panels.staleWarning.textContent = warning ?? '';
    this.panels.staleWarning.classList.toggle('visible', warning !== null);
  }
}

export function mount(root: Document = document): ConsoleApp {
  const byId = (id: string) => {
    const node = root.getElementById(id);
    if (!node) throw new Error(`missing #${id}`);
    return node;
  };
  const app = new ConsoleApp(new ApiClient(''), {
    actorSelect: byId('actor-select') as HTMLSelectElement,
    prevalence: byId('prevalence-panel'),
    series: byId('series-panel'),
    holistic: byId('holistic-panel'),
    draftEditor: byId('draft-editor') as HTMLTextAreaElement,
    validation: byId('draft-validation'),
    preview: byId('whatif-panel'),
    commitStatus: byId('commit-status'),
    versionHistory: byId('version-history'),
    staleWarning: byId('stale-warning'),
  });
  byId('preview-button').addEventListener('click', () => void app.previewDraft());
  byId('commit-button').addEventListener('click', () => void app.commitDraft());
  void app.start();
  window.setInterval(() => void app.checkStaleness(), 30_000);
  return app;
}
