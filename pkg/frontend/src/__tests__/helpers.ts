import { readFileSync } from 'node:fs';
import { dirname, join } from 'node:path';
import { fileURLToPath } from 'node:url';

import type { PolicyDraft } from '../types';

const fixturesDir = join(dirname(fileURLToPath(import.meta.url)), '..', '__fixtures__');

export function fixture<T>(name: string): T {
  return JSON.parse(readFileSync(join(fixturesDir, name), 'utf-8')) as T;
}

export function regionalDraft(): PolicyDraft {
  // Mirrors the regional policy fixture the engine tests use.
  return {
    schema_version: '1',
    region: 'AU-QLD',
    version: 'au-regional-qld-1',
    author: 'policy-team',
    rationale:
      'Regional adjustment: rhetoric that is mainstream campaign speech in this region is downweighed.',
    cue_multipliers: {
      'l1-cog-dogmatism': {
        multiplier: 0.2,
        reason: 'Dogmatic absolutes are routine in regional campaign speech.',
      },
      'l1-beh-denigration': {
        multiplier: 0.3,
        reason: 'Out-group denigration characterizes mainstream discourse here.',
      },
      'l1-cog-moral-absolutes': {
        multiplier: 0.3,
        reason: 'Hero/villain framing is standard regional political vocabulary.',
      },
    },
    dehumanization_floor: true,
    serial_N: 3,
    serial_D: 2,
    exemptions: [],
    thresholds_override: null,
  };
}

export interface RecordedCall {
  method: string;
  path: string;
  body: unknown;
}

/**
 * fetch stub: serves canned responses by "METHOD path-prefix" and records
 * every call so tests can prove which requests the console issued.
 */
export function mockFetch(routes: Record<string, unknown>): {
  fetchFn: typeof fetch;
  calls: RecordedCall[];
} {
  const calls: RecordedCall[] = [];
  const fetchFn = (async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = typeof input === 'string' ? input : input.toString();
    const path = url.replace(/^https?:\/\/[^/]+/, '');
    const method = init?.method ?? 'GET';
    calls.push({
      method,
      path,
      body: init?.body ? JSON.parse(init.body as string) : undefined,
    });
    // Longest matching prefix wins, so /actors/{id}/profile is not
    // shadowed by /actors.
    const matches = Object.entries(routes)
      .map(([route, payload]) => {
        const space = route.indexOf(' ');
        return { method: route.slice(0, space), path: route.slice(space + 1), payload };
      })
      .filter((r) => r.method === method && path.startsWith(r.path))
      .sort((a, b) => b.path.length - a.path.length);
    if (matches.length > 0) {
      const payload = matches[0].payload;
      if (
        typeof payload === 'object' &&
        payload !== null &&
        '__status' in (payload as Record<string, unknown>)
      ) {
        const { __status, ...rest } = payload as Record<string, unknown>;
        return new Response(JSON.stringify(rest), { status: __status as number });
      }
      return new Response(JSON.stringify(payload), { status: 200 });
    }
    return new Response(JSON.stringify({ detail: `no route for ${method} ${path}` }), {
      status: 404,
    });
  }) as typeof fetch;
  return { fetchFn, calls };
}
