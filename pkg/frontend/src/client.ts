/** Thin typed client over the service endpoints. */
import type {
  AskRequest,
  AskResponse,
  DecisionRecordDto,
  ModelDump,
  StateSnapshot,
  StepResult,
  WorldGeometry,
} from './types.js';

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ServiceError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

export class NavClient {
  constructor(
    private readonly baseUrl: string = '',
    private readonly fetchImpl: FetchLike = (u, i) => fetch(u, i),
  ) {}

  private async request<T>(method: 'GET' | 'POST', path: string,
                           body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { 'Content-Type': 'application/json' };
      init.body = JSON.stringify(body);
    }
    const resp = await this.fetchImpl(this.baseUrl + path, init);
    const payload = await resp.json();
    if (!resp.ok) {
      const message =
        typeof payload?.error === 'string' ? payload.error : resp.statusText;
      throw new ServiceError(resp.status, message);
    }
    return payload as T;
  }

  getWorld(): Promise<WorldGeometry> {
    return this.request('GET', '/world');
  }

  getState(): Promise<StateSnapshot> {
    return this.request('GET', '/state');
  }

  getModel(): Promise<ModelDump> {
    return this.request('GET', '/model');
  }

  getRecords(): Promise<{ records: DecisionRecordDto[] }> {
    return this.request('GET', '/records');
  }

  setTarget(x: number, y: number): Promise<StateSnapshot> {
    return this.request('POST', '/target', { x, y });
  }

  step(steps = 1): Promise<StepResult> {
    return this.request('POST', '/step', { steps });
  }

  setAuto(enabled: boolean): Promise<{ mode: string }> {
    return this.request('POST', '/auto', { enabled });
  }

  ask(req: AskRequest): Promise<AskResponse> {
    return this.request('POST', '/ask', req);
  }
}
