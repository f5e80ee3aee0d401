/** Pure scene construction: ViewModel in, drawable primitives out.
 *
 * Every primitive is sourced from a service response; nothing is inferred
 * client-side. The renderer just draws the list in order.
 */
import type { ModelDump, OverlayToggles, ViewModel } from './types.js';

export type Primitive =
  | { kind: 'line'; layer: string; a: [number, number]; b: [number, number] }
  | { kind: 'polyline'; layer: string; points: [number, number][] }
  | { kind: 'circle'; layer: string; center: [number, number]; radius: number }
  | {
      kind: 'arc';
      layer: string;
      center: [number, number];
      radius: number;
      start: number;
      end: number;
    }
  | { kind: 'rect'; layer: string; center: [number, number]; size: number; alpha: number }
  | { kind: 'dot'; layer: string; at: [number, number] }
  | { kind: 'arrow'; layer: string; at: [number, number]; theta: number }
  | { kind: 'asterisk'; layer: string; at: [number, number] };

export const ALL_OVERLAYS: OverlayToggles = {
  regions: true,
  trails: true,
  conveyors: true,
  skeleton: true,
};

function conveyorAlpha(count: number, maxCount: number): number {
  return maxCount > 0 ? Math.min(1, count / maxCount) : 0;
}

export function buildOverlay(model: ModelDump, toggles: OverlayToggles): Primitive[] {
  const out: Primitive[] = [];
  if (toggles.regions) {
    for (const region of model.regions) {
      out.push({ kind: 'circle', layer: 'regions', center: region.center, radius: region.radius });
      for (const door of region.doors) {
        out.push({
          kind: 'arc',
          layer: 'regions',
          center: region.center,
          radius: region.radius,
          start: door.start,
          end: door.start + door.extent,
        });
      }
      for (const exit of region.exits) {
        out.push({ kind: 'dot', layer: 'regions', at: exit });
      }
    }
  }
  if (toggles.trails) {
    for (const trail of model.trails) {
      out.push({ kind: 'polyline', layer: 'trails', points: trail });
    }
  }
  if (toggles.conveyors) {
    const maxCount = model.conveyors.reduce((m, c) => Math.max(m, c.count), 0);
    for (const cell of model.conveyors) {
      out.push({
        kind: 'rect',
        layer: 'conveyors',
        center: cell.center,
        size: cell.size,
        alpha: conveyorAlpha(cell.count, maxCount),
      });
    }
  }
  if (toggles.skeleton) {
    const centers = new Map(model.regions.map((r) => [r.id, r.center]));
    for (const [a, b] of model.skeleton) {
      const ca = centers.get(a);
      const cb = centers.get(b);
      if (ca && cb) {
        out.push({ kind: 'line', layer: 'skeleton', a: ca, b: cb });
      }
    }
  }
  return out;
}

export function buildScene(vm: ViewModel, toggles: OverlayToggles = ALL_OVERLAYS): Primitive[] {
  const out: Primitive[] = [];
  for (const [x1, y1, x2, y2] of vm.world.segments) {
    out.push({ kind: 'line', layer: 'walls', a: [x1, y1], b: [x2, y2] });
  }
  out.push(...buildOverlay(vm.model, toggles));
  const [x, y, theta] = vm.state.pose;
  out.push({ kind: 'arrow', layer: 'robot', at: [x, y], theta });
  if (vm.state.target) {
    // the target renders as an asterisk, per the transcript convention
    out.push({ kind: 'asterisk', layer: 'target', at: vm.state.target });
  }
  return out;
}

export function countByLayer(primitives: Primitive[]): Record<string, number> {
  const counts: Record<string, number> = {};
  for (const p of primitives) {
    counts[p.layer] = (counts[p.layer] ?? 0) + 1;
  }
  return counts;
}
