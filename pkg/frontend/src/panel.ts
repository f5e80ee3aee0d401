/** Question-panel logic: candidate listing and transcript maintenance. */
import type { NavClient } from './client.js';
import type {
  AskRequest,
  AskResponse,
  DecisionRecordDto,
  QuestionKind,
  TranscriptEntry,
} from './types.js';

export interface CandidateRow {
  index: number;
  kind: 'move' | 'turn';
  actionIndex: number;
  magnitude: number;
  chosen: boolean;
  vetoedBy: string | null;
  /** Total comment strength C_k; null when tier 1 decided or it was vetoed. */
  columnSum: number | null;
}

/** Candidates of the last decision with their total strengths, for the
 * why-not picker. Sums come straight from the recorded strengths matrix. */
export function candidateRows(record: DecisionRecordDto): CandidateRow[] {
  const sums = new Map<number, number>();
  if (record.comments) {
    record.comments.actions.forEach((candidateIndex, col) => {
      let total = 0;
      for (const row of record.comments!.strengths) {
        total += row[col] ?? 0;
      }
      sums.set(candidateIndex, total);
    });
  }
  return record.candidates.map((action, index) => ({
    index,
    kind: action.kind,
    actionIndex: action.index,
    magnitude: action.magnitude,
    chosen: index === record.chosen,
    vetoedBy: record.tier1.vetoes[String(index)] ?? null,
    columnSum: sums.get(index) ?? null,
  }));
}

export class QuestionPanel {
  readonly transcript: TranscriptEntry[] = [];
  private inFlight = false;

  constructor(private readonly client: NavClient) {}

  /** Fire one question; one in-flight ask at a time. */
  async ask(kind: QuestionKind, options: Omit<AskRequest, 'kind'> = {}): Promise<AskResponse> {
    if (this.inFlight) {
      throw new Error('a question is already in flight');
    }
    this.inFlight = true;
    try {
      const resp = await this.client.ask({ kind, ...options });
      this.transcript.push({
        cycle: resp.cycle,
        question: resp.question,
        text: resp.text,
      });
      return resp;
    } finally {
      this.inFlight = false;
    }
  }

  askWhyNot(record: DecisionRecordDto, candidateIndex: number): Promise<AskResponse> {
    const action = record.candidates[candidateIndex];
    if (!action) {
      throw new Error(`no candidate at index ${candidateIndex}`);
    }
    return this.ask('why_not', {
      alternative: { kind: action.kind, index: action.index },
    });
  }
}
