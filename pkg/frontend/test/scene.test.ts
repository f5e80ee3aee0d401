import { describe, expect, it } from 'vitest';

import { ALL_OVERLAYS, buildScene, countByLayer } from '../src/scene.js';
import type { ModelDump, StateSnapshot, ViewModel, WorldGeometry } from '../src/types.js';
import { lastOf, loadSession } from './fixture.js';

const session = loadSession();
const world = lastOf(session, 'GET', '/world').response as WorldGeometry;
const state = lastOf(session, 'GET', '/state').response as StateSnapshot;
const model = lastOf(session, 'GET', '/model').response as ModelDump;
const vm: ViewModel = { world, state, model };

const EMPTY_MODEL: ModelDump = { regions: [], trails: [], conveyors: [], skeleton: [] };

describe('buildScene', () => {
  it('renders map and pose only for an empty model', () => {
    const bare: ViewModel = {
      world,
      model: EMPTY_MODEL,
      state: { ...state, target: null },
    };
    const prims = buildScene(bare);
    const counts = countByLayer(prims);
    expect(counts['walls']).toBe(world.segments.length);
    expect(counts['robot']).toBe(1);
    expect(prims.length).toBe(world.segments.length + 1);
  });

  it('overlay primitive counts match the model endpoint counts', () => {
    const counts = countByLayer(buildScene(vm));
    const doorTotal = model.regions.reduce((n, r) => n + r.doors.length, 0);
    const exitTotal = model.regions.reduce((n, r) => n + r.exits.length, 0);
    expect(model.regions.length).toBeGreaterThan(0);
    expect(counts['regions']).toBe(model.regions.length + doorTotal + exitTotal);
    expect(counts['trails']).toBe(model.trails.length);
    expect(counts['conveyors']).toBe(model.conveyors.length);
    expect(counts['skeleton'] ?? 0).toBe(model.skeleton.length);
    expect(counts['target']).toBe(1); // target set in the recorded state
  });

  it('region circles carry the served geometry unchanged', () => {
    const circles = buildScene(vm).filter(
      (p) => p.kind === 'circle' && p.layer === 'regions',
    );
    expect(circles.map((c: any) => [c.center, c.radius])).toEqual(
      model.regions.map((r) => [r.center, r.radius]),
    );
  });

  it('toggles remove exactly their layer', () => {
    for (const layer of ['regions', 'trails', 'conveyors', 'skeleton'] as const) {
      const toggles = { ...ALL_OVERLAYS, [layer]: false };
      const counts = countByLayer(buildScene(vm, toggles));
      expect(counts[layer] ?? 0).toBe(0);
      expect(counts['walls']).toBe(world.segments.length);
    }
  });

  it('conveyor alpha scales with visit count', () => {
    const rects = buildScene(vm).filter((p) => p.kind === 'rect') as {
      alpha: number;
    }[];
    const maxCount = Math.max(...model.conveyors.map((c) => c.count));
    for (const [i, rect] of rects.entries()) {
      expect(rect.alpha).toBeCloseTo(model.conveyors[i]!.count / maxCount, 10);
    }
  });
});
