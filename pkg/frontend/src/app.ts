/** Browser entry point: canvas rendering, run controls, question panel. */
import { NavClient, ServiceError } from './client.js';
import { QuestionPanel, candidateRows } from './panel.js';
import { buildScene, type Primitive } from './scene.js';
import type { OverlayToggles, StateSnapshot, ViewModel } from './types.js';

const POLL_MS = 250;

function worldToCanvas(
  bounds: [number, number, number, number],
  canvas: HTMLCanvasElement,
): (p: [number, number]) => [number, number] {
  const [minx, miny, maxx, maxy] = bounds;
  const scale = Math.min(canvas.width / (maxx - minx), canvas.height / (maxy - miny));
  return ([x, y]) => [(x - minx) * scale, canvas.height - (y - miny) * scale];
}

const LAYER_STYLE: Record<string, string> = {
  walls: '#222',
  regions: '#4a90d9',
  trails: '#2e8b57',
  conveyors: '#e0a030',
  skeleton: '#9b59b6',
  robot: '#d0342c',
  target: '#d0342c',
};

function drawPrimitive(
  ctx: CanvasRenderingContext2D,
  map: (p: [number, number]) => [number, number],
  scale: number,
  p: Primitive,
): void {
  ctx.strokeStyle = LAYER_STYLE[p.layer] ?? '#000';
  ctx.fillStyle = ctx.strokeStyle;
  ctx.lineWidth = p.layer === 'walls' ? 2 : 1;
  ctx.globalAlpha = 1;
  ctx.beginPath();
  switch (p.kind) {
    case 'line': {
      ctx.moveTo(...map(p.a));
      ctx.lineTo(...map(p.b));
      ctx.stroke();
      break;
    }
    case 'polyline': {
      p.points.forEach((pt, i) => (i === 0 ? ctx.moveTo(...map(pt)) : ctx.lineTo(...map(pt))));
      ctx.stroke();
      break;
    }
    case 'circle': {
      const [cx, cy] = map(p.center);
      ctx.arc(cx, cy, p.radius * scale, 0, 2 * Math.PI);
      ctx.stroke();
      break;
    }
    case 'arc': {
      const [cx, cy] = map(p.center);
      // canvas y-axis points down: negate angles
      ctx.lineWidth = 3;
      ctx.arc(cx, cy, p.radius * scale, -p.end, -p.start);
      ctx.stroke();
      break;
    }
    case 'rect': {
      const [cx, cy] = map(p.center);
      const s = p.size * scale;
      ctx.globalAlpha = 0.2 + 0.5 * p.alpha;
      ctx.fillRect(cx - s / 2, cy - s / 2, s, s);
      break;
    }
    case 'dot': {
      const [x, y] = map(p.at);
      ctx.arc(x, y, 2.5, 0, 2 * Math.PI);
      ctx.fill();
      break;
    }
    case 'arrow': {
      const [x, y] = map(p.at);
      const len = 14;
      const dx = Math.cos(-p.theta);
      const dy = Math.sin(-p.theta);
      ctx.moveTo(x, y);
      ctx.lineTo(x + len * dx, y + len * dy);
      ctx.lineWidth = 3;
      ctx.stroke();
      ctx.beginPath();
      ctx.arc(x, y, 4, 0, 2 * Math.PI);
      ctx.fill();
      break;
    }
    case 'asterisk': {
      const [x, y] = map(p.at);
      ctx.font = '18px sans-serif';
      ctx.textAlign = 'center';
      ctx.textBaseline = 'middle';
      ctx.fillText('*', x, y);
      break;
    }
  }
  ctx.globalAlpha = 1;
}

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
}

export async function startApp(baseUrl = ''): Promise<void> {
  const client = new NavClient(baseUrl);
  const panel = new QuestionPanel(client);
  const canvas = byId<HTMLCanvasElement>('map');
  const ctx = canvas.getContext('2d');
  if (!ctx) throw new Error('canvas 2d context unavailable');

  const toggles: OverlayToggles = {
    regions: true,
    trails: true,
    conveyors: true,
    skeleton: true,
  };
  const world = await client.getWorld();
  const map = worldToCanvas(world.bounds, canvas);
  const scale = map([world.bounds[0] + 1, world.bounds[1]])[0] - map([world.bounds[0], world.bounds[1]])[0];

  let auto = false;
  let lastState: StateSnapshot | null = null;

  async function refresh(): Promise<void> {
    const [state, model] = await Promise.all([client.getState(), client.getModel()]);
    lastState = state;
    const vm: ViewModel = { world, state, model };
    ctx!.clearRect(0, 0, canvas.width, canvas.height);
    for (const prim of buildScene(vm, toggles)) {
      drawPrimitive(ctx!, map, scale, prim);
    }
    renderStatus(state);
    renderCandidates(state);
    renderTranscript();
  }

  function renderStatus(state: StateSnapshot): void {
    byId('status').textContent =
      `cycle ${state.cycle} | phase ${state.phase}` +
      ` | pose (${state.pose[0].toFixed(2)}, ${state.pose[1].toFixed(2)})` +
      (state.arrived ? ' | arrived' : '');
  }

  function renderCandidates(state: StateSnapshot): void {
    const list = byId('candidates');
    list.innerHTML = '';
    if (!state.last_record) return;
    for (const row of candidateRows(state.last_record)) {
      const li = document.createElement('li');
      const sum = row.columnSum === null ? '' : ` C=${row.columnSum.toFixed(1)}`;
      const mark = row.chosen ? ' (chosen)' : row.vetoedBy ? ` (vetoed: ${row.vetoedBy})` : '';
      li.textContent = `${row.kind} ${row.magnitude}${sum}${mark}`;
      if (!row.chosen) {
        li.style.cursor = 'pointer';
        li.onclick = () => {
          void panel
            .askWhyNot(state.last_record!, row.index)
            .then(refresh)
            .catch(showError);
        };
      }
      list.appendChild(li);
    }
  }

  function renderTranscript(): void {
    const list = byId('transcript');
    list.innerHTML = '';
    for (const entry of panel.transcript) {
      const li = document.createElement('li');
      li.textContent = `[${entry.cycle}] ${entry.question}: ${entry.text}`;
      list.appendChild(li);
    }
  }

  function showError(err: unknown): void {
    byId('error').textContent = err instanceof ServiceError ? err.message : String(err);
  }

  canvas.addEventListener('click', (ev) => {
    const rect = canvas.getBoundingClientRect();
    const px = ev.clientX - rect.left;
    const py = ev.clientY - rect.top;
    const [minx, miny, maxx, maxy] = world.bounds;
    const s = Math.min(canvas.width / (maxx - minx), canvas.height / (maxy - miny));
    void client
      .setTarget(minx + px / s, miny + (canvas.height - py) / s)
      .then(refresh)
      .catch(showError);
  });

  byId('step').onclick = () => void client.step(1).then(refresh).catch(showError);
  byId('auto').onclick = () => {
    auto = !auto;
    void client.setAuto(auto).then(refresh).catch(showError);
  };
  byId('ask-why').onclick = () => void panel.ask('why').then(refresh).catch(showError);
  byId('ask-confidence').onclick = () =>
    void panel.ask('confidence').then(refresh).catch(showError);
  byId('ask-here').onclick = () => {
    if (lastState) {
      void panel
        .ask('hypothetical', { pose: lastState.pose })
        .then(refresh)
        .catch(showError);
    }
  };
  for (const key of Object.keys(toggles) as (keyof OverlayToggles)[]) {
    byId<HTMLInputElement>(`toggle-${key}`).onchange = (ev) => {
      toggles[key] = (ev.target as HTMLInputElement).checked;
      void refresh().catch(showError);
    };
  }

  setInterval(() => {
    if (auto && lastState && !lastState.arrived && lastState.target) {
      void client.step(1).then(refresh).catch(showError);
    }
  }, POLL_MS);

  await refresh();
}
