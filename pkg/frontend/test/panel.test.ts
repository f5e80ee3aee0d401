import { describe, expect, it } from 'vitest';

import { NavClient } from '../src/client.js';
import { QuestionPanel, candidateRows } from '../src/panel.js';
import type { AskRequest, AskResponse, StateSnapshot } from '../src/types.js';
import { fixtureFetch, lastOf, loadSession } from './fixture.js';

const session = loadSession();
const state = lastOf(session, 'GET', '/state').response as StateSnapshot;
const record = state.last_record!;
const asks = session.filter((e) => e.path === '/ask');

describe('candidateRows', () => {
  it('sums comment strengths per candidate column', () => {
    const rows = candidateRows(record);
    expect(rows.length).toBe(record.candidates.length);
    record.comments!.actions.forEach((candidateIndex, col) => {
      let expected = 0;
      for (const strengthRow of record.comments!.strengths) {
        expected += strengthRow[col]!;
      }
      expect(rows[candidateIndex]!.columnSum).toBeCloseTo(expected, 10);
    });
  });

  it('marks exactly the chosen candidate', () => {
    const rows = candidateRows(record);
    expect(rows.filter((r) => r.chosen).map((r) => r.index)).toEqual([record.chosen]);
    for (const row of rows) {
      const action = record.candidates[row.index]!;
      expect(row.kind).toBe(action.kind);
      expect(row.magnitude).toBe(action.magnitude);
    }
  });

  it('reports vetoes and leaves vetoed sums null', () => {
    const vetoed = {
      ...record,
      tier1: { ...record.tier1, vetoes: { '1': 'avoidwalls' } },
      comments: {
        advisors: ['greedy'],
        actions: [0, 2, 3, 4],
        strengths: [[5, 5, 5, 5]],
      },
    };
    const rows = candidateRows(vetoed);
    expect(rows[1]!.vetoedBy).toBe('avoidwalls');
    expect(rows[1]!.columnSum).toBeNull();
    expect(rows[0]!.vetoedBy).toBeNull();
    expect(rows[0]!.columnSum).toBe(5);
  });
});

describe('QuestionPanel', () => {
  it('transcript texts byte-match the recorded service responses', async () => {
    const panel = new QuestionPanel(new NavClient('', fixtureFetch(session)));
    for (const ex of asks) {
      const body = ex.body as AskRequest;
      const { kind, ...options } = body;
      await panel.ask(kind, options);
    }
    expect(panel.transcript.length).toBe(asks.length);
    panel.transcript.forEach((entry, i) => {
      const recorded = asks[i]!.response as AskResponse;
      expect(entry.text).toBe(recorded.text);
      expect(entry.question).toBe(recorded.question);
      expect(entry.cycle).toBe(recorded.cycle);
    });
  });

  it('covers all four question kinds in the recording', () => {
    expect(new Set(asks.map((e) => (e.body as AskRequest).kind))).toEqual(
      new Set(['why', 'confidence', 'why_not', 'hypothetical']),
    );
  });

  it('allows only one question in flight', async () => {
    let release!: (r: Response) => void;
    const panel = new QuestionPanel(
      new NavClient('', () => new Promise((resolve) => (release = resolve))),
    );
    const first = panel.ask('why');
    await expect(panel.ask('confidence')).rejects.toThrow('already in flight');
    const recorded = asks[0]!.response as AskResponse;
    release(new Response(JSON.stringify(recorded), { status: 200 }));
    await first;
    expect(panel.transcript.length).toBe(1);
    // the guard resets once the response lands
    const again = panel.ask('why');
    release(new Response(JSON.stringify(recorded), { status: 200 }));
    await again;
    expect(panel.transcript.length).toBe(2);
  });

  it('askWhyNot sends the picked candidate as the alternative', async () => {
    const sent: unknown[] = [];
    const recorded = asks.find((e) => (e.body as AskRequest).kind === 'why_not')!;
    const panel = new QuestionPanel(
      new NavClient('', async (_url, init) => {
        sent.push(JSON.parse(String(init?.body)));
        return new Response(JSON.stringify(recorded.response), { status: 200 });
      }),
    );
    const resp = await panel.askWhyNot(record, 0);
    expect(sent).toEqual([
      { kind: 'why_not', alternative: { kind: 'move', index: 0 } },
    ]);
    expect(resp.text).toBe((recorded.response as AskResponse).text);
    expect(() => panel.askWhyNot(record, 99)).toThrow('no candidate at index 99');
  });
});
