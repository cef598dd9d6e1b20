/**
 * Typed client for the /api/v1 service.
 *
 * Reads are plain GETs; the only mutating call the console ever makes is
 * commitPolicy. What-if previews go through POST /whatif, which the
 * service guarantees to be side-effect-free.
 */

import type {
  ActorsPayload,
  AuditsPayload,
  CommitResult,
  HolisticPayload,
  PoliciesPayload,
  PolicyDraft,
  ProfilePayload,
  SeriesPayload,
  WhatIfPayload,
} from './types';

export class ServiceError extends Error {
  constructor(
    public status: number,
    public detail: string,
  ) {
    super(`service error ${status}: ${detail}`);
  }
}

export class ServiceUnreachable extends Error {
  constructor(cause: unknown) {
    super(`service unreachable: ${String(cause)}`);
  }
}

async function parseError(response: Response): Promise<never> {
  let detail = response.statusText;
  try {
    const body = (await response.json()) as { detail?: string };
    if (body && typeof body.detail === 'string') detail = body.detail;
  } catch {
    // keep statusText
  }
  throw new ServiceError(response.status, detail);
}

export class ApiClient {
  constructor(
    private baseUrl: string = '',
    private fetchFn: typeof fetch = globalThis.fetch.bind(globalThis),
  ) {}

  private async get<T>(path: string): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(`${this.baseUrl}${path}`);
    } catch (cause) {
      throw new ServiceUnreachable(cause);
    }
    if (!response.ok) await parseError(response);
    return (await response.json()) as T;
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(`${this.baseUrl}${path}`, {
        method: 'POST',
        headers: { 'Content-Type': 'application/json' },
        body: JSON.stringify(body),
      });
    } catch (cause) {
      throw new ServiceUnreachable(cause);
    }
    if (!response.ok) await parseError(response);
    return (await response.json()) as T;
  }

  actors(): Promise<ActorsPayload> {
    return this.get('/api/v1/actors');
  }

  profile(actorId: string, windowDays?: number): Promise<ProfilePayload> {
    const query = windowDays !== undefined ? `?window_days=${windowDays}` : '';
    return this.get(`/api/v1/actors/${encodeURIComponent(actorId)}/profile${query}`);
  }

  series(actorId: string, cadenceDays: number): Promise<SeriesPayload> {
    return this.get(
      `/api/v1/actors/${encodeURIComponent(actorId)}/series?cadence_days=${cadenceDays}`,
    );
  }

  holistic(actorId: string): Promise<HolisticPayload> {
    return this.get(`/api/v1/actors/${encodeURIComponent(actorId)}/holistic`);
  }

  audits(actorId: string): Promise<AuditsPayload> {
    return this.get(`/api/v1/actors/${encodeURIComponent(actorId)}/audits`);
  }

  policies(): Promise<PoliciesPayload> {
    return this.get('/api/v1/policies');
  }

  /** Side-effect-free reclassification preview for a draft policy. */
  whatIf(draft: PolicyDraft, actors?: string[]): Promise<WhatIfPayload> {
    const body: Record<string, unknown> = { policy: draft };
    if (actors !== undefined) body.actors = actors;
    return this.post('/api/v1/whatif', body);
  }

  /** The single mutating call: persist a policy version. */
  commitPolicy(draft: PolicyDraft): Promise<CommitResult> {
    return this.post('/api/v1/policies', draft);
  }
}
