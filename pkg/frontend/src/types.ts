/** Wire types for the navigation service; see docs/service_api.md. */

export interface WorldGeometry {
  name: string;
  bounds: [number, number, number, number];
  segments: [number, number, number, number][];
}

export interface ActionDto {
  kind: 'move' | 'turn';
  index: number;
  magnitude: number;
}

export interface Tier1Dto {
  mandate: number | null;
  vetoes: Record<string, string>;
  deciding_advisor: string | null;
}

export interface CommentsDto {
  advisors: string[];
  actions: number[];
  strengths: number[][];
}

export interface DecisionRecordDto {
  cycle: number;
  phase: 'move' | 'turn';
  candidates: ActionDto[];
  tier1: Tier1Dto;
  comments: CommentsDto | null;
  chosen: number;
  decided_by: 'tier1_mandate' | 'tier1_lastleft' | 'tier3';
  tie_broken: boolean;
  truncated: boolean;
  pose?: [number, number, number];
  target?: [number, number];
  previous_orientation?: number | null;
}

export interface TranscriptEntry {
  cycle: number;
  question: string;
  text: string;
}

export interface StateSnapshot {
  session: string;
  world: string;
  mode: 'paused' | 'auto';
  pose: [number, number, number];
  target: [number, number] | null;
  cycle: number;
  arrived: boolean;
  phase: 'move' | 'turn';
  last_record: DecisionRecordDto | null;
  transcript: TranscriptEntry[];
  regions: number;
  trails: number;
}

export interface RegionDto {
  id: number;
  center: [number, number];
  radius: number;
  exits: [number, number][];
  doors: { start: number; extent: number }[];
}

export interface ConveyorDto {
  cell: [number, number];
  center: [number, number];
  size: number;
  count: number;
}

export interface ModelDump {
  regions: RegionDto[];
  trails: [number, number][][];
  conveyors: ConveyorDto[];
  skeleton: [number, number][];
}

export interface StepResult {
  records: DecisionRecordDto[];
  arrived: boolean;
  state: StateSnapshot;
}

export type QuestionKind = 'why' | 'confidence' | 'why_not' | 'hypothetical';

export interface AskRequest {
  kind: QuestionKind;
  alternative?: { kind: string; index: number };
  pose?: [number, number, number];
}

export interface AskResponse {
  cycle: number;
  question: QuestionKind;
  text: string;
  contributors: { support: string[]; oppose: string[] };
  metrics: {
    column_sums: number[];
    agreement: number[];
    overall: number[];
    confidence: number[];
    t_support: number[][];
  } | null;
}

/** Everything a frame needs; populated exclusively from service responses. */
export interface ViewModel {
  world: WorldGeometry;
  state: StateSnapshot;
  model: ModelDump;
}

export interface OverlayToggles {
  regions: boolean;
  trails: boolean;
  conveyors: boolean;
  skeleton: boolean;
}
