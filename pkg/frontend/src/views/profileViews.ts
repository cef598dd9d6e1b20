/**
 * Profile views: level prevalence, time series, and the holistic grid.
 *
 * Every number shown is the service's value rendered verbatim via
 * String(...); bar widths are presentation, the text is the data. Each
 * view links to the actor's audit records so a reviewer can jump from any
 * chart to the record that produced it.
 */

import { LEVEL_NAMES } from '../types';
import type { HolisticPayload, ProfilePayload, SeriesPayload } from '../types';

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

function auditLink(actorId: string): HTMLAnchorElement {
  const link = el('a', 'audit-link', 'audit records');
  link.href = `#/actors/${encodeURIComponent(actorId)}/audits`;
  link.dataset.actorId = actorId;
  return link;
}

function versionsBadge(versions: {
  lexicon: string;
  model: string;
  policy: string;
}): HTMLElement {
  return el(
    'span',
    'versions-badge',
    `lexicon ${versions.lexicon} · model ${versions.model} · policy ${versions.policy}`,
  );
}

export function renderLevelPrevalence(
  container: HTMLElement,
  profile: ProfilePayload,
): void {
  container.replaceChildren();
  const section = el('section', 'prevalence-view');
  const heading = el('h3', undefined, `Level prevalence — ${profile.actor_id}`);
  section.append(heading, versionsBadge(profile.versions));

  const table = el('table', 'prevalence-table');
  const head = el('tr');
  head.append(el('th', undefined, 'level'), el('th', undefined, 'share'), el('th'));
  table.append(head);
  profile.level_distribution.forEach((share, level) => {
    const row = el('tr');
    row.dataset.level = String(level);
    row.append(el('td', undefined, `${level} ${LEVEL_NAMES[level]}`));
    row.append(el('td', 'share-value', String(share)));
    const barCell = el('td', 'bar-cell');
    const bar = el('div', 'bar');
    bar.style.width = `${Math.round(share * 100)}%`;
    barCell.append(bar);
    row.append(barCell);
    table.append(row);
  });
  section.append(table);

  const meta = el(
    'p',
    'profile-meta',
    `classification ${profile.classification_name ?? 'n/a'} · ` +
      `confidence ${String(profile.confidence)} · items ${String(profile.n_items)} · ` +
      `trend ${profile.trend}`,
  );
  section.append(meta, auditLink(profile.actor_id));
  container.append(section);
}

export function renderSeries(container: HTMLElement, series: SeriesPayload): void {
  container.replaceChildren();
  const section = el('section', 'series-view');
  section.append(
    el('h3', undefined, `Tracking — ${series.actor_id} (every ${series.cadence_days}d)`),
    versionsBadge(series.versions),
  );

  const table = el('table', 'series-table');
  const head = el('tr');
  ['window start', 'p0', 'p1', 'p2', 'p3', 'class', 'confidence'].forEach((h) =>
    head.append(el('th', undefined, h)),
  );
  table.append(head);
  for (const point of series.points) {
    const row = el('tr');
    row.append(el('td', undefined, point.window_start));
    point.level_distribution.forEach((p, level) => {
      const cell = el('td', `p-value p${level}`, String(p));
      row.append(cell);
    });
    row.append(
      el('td', 'class-value', point.classification === null ? '' : String(point.classification)),
      el('td', 'confidence-value', String(point.confidence)),
    );
    table.append(row);
  }
  section.append(table);

  if (series.alerts.length > 0) {
    const list = el('ul', 'alert-list');
    for (const alert of series.alerts) {
      list.append(
        el(
          'li',
          `alert alert-${alert.kind.toLowerCase()}`,
          `${alert.kind}: level ${alert.from_level} -> ${alert.to_level} at ${alert.at}`,
        ),
      );
    }
    section.append(list);
  }
  section.append(auditLink(series.actor_id));
  container.append(section);
}

export function renderHolisticGrid(
  container: HTMLElement,
  holistic: HolisticPayload,
): void {
  container.replaceChildren();
  const section = el('section', 'holistic-view');
  section.append(
    el('h3', undefined, `Holistic profile — ${holistic.actor_id}`),
    versionsBadge(holistic.versions),
  );

  const table = el('table', 'holistic-grid');
  const head = el('tr');
  head.append(el('th', undefined, 'level'));
  holistic.types.forEach((t) => head.append(el('th', undefined, t)));
  head.append(el('th', undefined, 'General'));
  table.append(head);

  // Highest level on top, mirroring the continuum's usual presentation.
  for (let level = 3; level >= 0; level--) {
    const row = el('tr');
    row.dataset.level = String(level);
    row.append(el('td', undefined, `${level} ${LEVEL_NAMES[level]}`));
    holistic.types.forEach((_, t) => {
      const value = holistic.grid[level][t];
      const cell = el('td', 'grid-value', String(value));
      if (value > 0) cell.classList.add('nonzero');
      row.append(cell);
    });
    const general = el('td', 'grid-value general', String(holistic.general[level]));
    if (holistic.general[level] > 0) general.classList.add('nonzero');
    row.append(general);
    table.append(row);
  }
  section.append(table, auditLink(holistic.actor_id));
  container.append(section);
}

/** Shown whenever a fetch fails; the console never substitutes made-up data. */
export function renderUnreachableBanner(container: HTMLElement, message: string): void {
  const banner = el('div', 'banner banner-error');
  banner.setAttribute('role', 'alert');
  banner.textContent = `Service unreachable — nothing to display. ${message}`;
  container.replaceChildren(banner);
}
