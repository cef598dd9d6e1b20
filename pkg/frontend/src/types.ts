/**
 * Payload types mirroring the /api/v1 service JSON.
 *
 * The console never derives scores client-side; these shapes are the full
 * extent of what it knows about the numbers it displays.
 */

export interface Versions {
  lexicon: string;
  model: string;
  policy: string;
}

export interface ActorSummary {
  id: string;
  kind: string;
  display_name: string;
  region: string;
  parent_id: string | null;
}

export interface ActorsPayload {
  versions: Versions;
  actors: ActorSummary[];
}

export interface DehumanizationAssessment {
  serial: boolean;
  distinct_items: number;
  distinct_days: number;
  rate: number;
  window_days: number;
  threshold_items: number;
  threshold_days: number;
}

export interface ProfilePayload {
  actor_id: string;
  window_start: string;
  window_end: string;
  half_life_days: number;
  level_evidence: number[];
  level_distribution: number[];
  type_memberships: Record<string, number>;
  member_types: string[];
  confidence: number;
  n_items: number;
  serial_dehumanization: boolean;
  dehumanization: DehumanizationAssessment | null;
  classification: number | null;
  classification_name: string | null;
  trend: string;
  versions: Versions;
  computed_level?: number;
  effective_level?: number;
  dehumanization_override?: boolean;
}

export interface TrendAlertPayload {
  actor_id: string;
  kind: string;
  from_level: number;
  to_level: number;
  at: string;
  evidence: string;
}

export interface SeriesPayload {
  versions: Versions;
  actor_id: string;
  cadence_days: number;
  points: ProfilePayload[];
  alerts: TrendAlertPayload[];
  csv: string;
}

export interface HolisticPayload {
  actor_id: string;
  types: string[];
  grid: number[][];
  general: number[];
  versions: Versions;
}

export interface AuditsPayload {
  versions: Versions;
  actor_id: string;
  records: Record<string, unknown>[];
}

export interface PoliciesPayload {
  versions: Versions;
  policy_versions: string[];
  active: string;
}

export interface CueMultiplierEntry {
  multiplier: number;
  reason: string;
}

export interface ExemptionEntry {
  actor_id: string;
  scope: string;
  reason: string;
  granted_by: string;
  granted_at: string;
  effective_level_override: string | null;
}

/** A client-side policy draft; shape matches the service's policy schema. */
export interface PolicyDraft {
  schema_version: string;
  region: string;
  version: string;
  author: string;
  rationale: string;
  cue_multipliers: Record<string, CueMultiplierEntry>;
  dehumanization_floor: boolean;
  serial_N: number;
  serial_D: number;
  exemptions: ExemptionEntry[];
  thresholds_override: number[] | null;
}

export interface ChangedCue {
  cue_id: string;
  effective_weight_before: number;
  effective_weight_after: number;
}

export interface SuppressionEvent {
  cue_id: string;
  requested_multiplier: number;
  reason: string;
}

export interface ActorDiff {
  actor_id: string;
  computed_level_before: number;
  computed_level_after: number;
  effective_level_before: number;
  effective_level_after: number;
  changed: boolean;
}

export interface WhatIfPayload {
  candidate_policy_version: string;
  active_policy_version: string;
  changed_cues: ChangedCue[];
  suppression_events: SuppressionEvent[];
  actors: ActorDiff[];
  versions: Versions;
}

export interface CommitResult {
  committed: string;
  versions: Versions;
}

export const LEVEL_NAMES = [
  'Partisanship',
  'Fringe',
  'ViolentExtremism',
  'Terrorism',
] as const;
