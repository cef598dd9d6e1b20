import { beforeEach, describe, expect, it } from 'vitest';

import {
  renderHolisticGrid,
  renderLevelPrevalence,
  renderSeries,
  renderUnreachableBanner,
} from '../views/profileViews';
import type { HolisticPayload, ProfilePayload, SeriesPayload } from '../types';
import { fixture } from './helpers';

let container: HTMLElement;

beforeEach(() => {
  container = document.createElement('div');
  document.body.replaceChildren(container);
});

describe('level prevalence view', () => {
  it('displays exactly the level shares the service sent', () => {
    const profile = fixture<ProfilePayload>('profile_westboro.json');
    renderLevelPrevalence(container, profile);
    const cells = [...container.querySelectorAll('.share-value')].map(
      (node) => node.textContent,
    );
    expect(cells).toEqual(profile.level_distribution.map((share) => String(share)));
  });

  it('shows classification, confidence, and item count verbatim', () => {
    const profile = fixture<ProfilePayload>('profile_westboro.json');
    renderLevelPrevalence(container, profile);
    const meta = container.querySelector('.profile-meta')?.textContent ?? '';
    expect(meta).toContain(String(profile.confidence));
    expect(meta).toContain(String(profile.n_items));
    expect(meta).toContain(profile.classification_name ?? '');
  });

  it('links to the underlying audit records', () => {
    const profile = fixture<ProfilePayload>('profile_westboro.json');
    renderLevelPrevalence(container, profile);
    const link = container.querySelector<HTMLAnchorElement>('.audit-link');
    expect(link?.dataset.actorId).toBe(profile.actor_id);
    expect(link?.getAttribute('href')).toContain('/audits');
  });

  it('carries the versions the numbers were computed under', () => {
    const profile = fixture<ProfilePayload>('profile_westboro.json');
    renderLevelPrevalence(container, profile);
    const badge = container.querySelector('.versions-badge')?.textContent ?? '';
    expect(badge).toContain(profile.versions.lexicon);
    expect(badge).toContain(profile.versions.policy);
  });
});

describe('series view', () => {
  it('renders one row per window with the exact payload values', () => {
    const series = fixture<SeriesPayload>('series_base.json');
    renderSeries(container, series);
    const rows = [...container.querySelectorAll('.series-table tr')].slice(1);
    expect(rows).toHaveLength(series.points.length);
    rows.forEach((row, i) => {
      const point = series.points[i];
      const values = [...row.querySelectorAll('.p-value')].map((n) => n.textContent);
      expect(values).toEqual(point.level_distribution.map((p) => String(p)));
      expect(row.querySelector('.confidence-value')?.textContent).toBe(
        String(point.confidence),
      );
      expect(row.querySelector('.class-value')?.textContent).toBe(
        point.classification === null ? '' : String(point.classification),
      );
    });
  });

  it('lists alerts when the service reported them', () => {
    const series = fixture<SeriesPayload>('series_base.json');
    renderSeries(container, series);
    const rendered = container.querySelectorAll('.alert').length;
    expect(rendered).toBe(series.alerts.length);
  });
});

describe('holistic grid view', () => {
  it('renders the full level x type grid plus the general column verbatim', () => {
    const holistic = fixture<HolisticPayload>('holistic_militia.json');
    renderHolisticGrid(container, holistic);
    for (let level = 0; level < 4; level++) {
      const row = container.querySelector(`tr[data-level="${level}"]`);
      expect(row).not.toBeNull();
      const values = [...row!.querySelectorAll('.grid-value')].map((n) => n.textContent);
      expect(values).toEqual([
        ...holistic.grid[level].map((v) => String(v)),
        String(holistic.general[level]),
      ]);
    }
  });

  it('marks nonzero cells so cross-type patterns stand out', () => {
    const holistic = fixture<HolisticPayload>('holistic_militia.json');
    renderHolisticGrid(container, holistic);
    const nonzero = container.querySelectorAll('.grid-value.nonzero').length;
    const expected =
      holistic.grid.flat().filter((v) => v > 0).length +
      holistic.general.filter((v) => v > 0).length;
    expect(nonzero).toBe(expected);
  });
});

describe('service-unreachable banner', () => {
  it('replaces the view with an alert and fabricates nothing', () => {
    renderUnreachableBanner(container, 'connection refused');
    const banner = container.querySelector('[role="alert"]');
    expect(banner?.textContent).toContain('Service unreachable');
    expect(container.querySelectorAll('table')).toHaveLength(0);
  });
});
