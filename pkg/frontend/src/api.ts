import { AnalysisPayload, ApiErrorPayload, Coord, GamePayload } from './types.js';

export class ApiError extends Error {
    constructor(readonly status: number, readonly payload: ApiErrorPayload) {
        super(payload.message);
    }
}

export interface Api {
    createGame(body: { deal?: string; seed?: number }): Promise<GamePayload>;
    getGame(id: string): Promise<GamePayload>;
    playMove(id: string, dest: Coord): Promise<GamePayload>;
    engineMove(id: string): Promise<GamePayload>;
    undo(id: string): Promise<GamePayload>;
    analysis(id: string, signal?: AbortSignal): Promise<AnalysisPayload>;
}

export class Client implements Api {
    constructor(
        private baseUrl: string,
        private fetchFn: typeof fetch = (...args) => fetch(...args),
    ) {}

    private async request<T>(
        method: string,
        path: string,
        body?: unknown,
        signal?: AbortSignal,
    ): Promise<T> {
        const response = await this.fetchFn(`${this.baseUrl}${path}`, {
            method,
            headers: body === undefined ? undefined : { 'Content-Type': 'application/json' },
            body: body === undefined ? undefined : JSON.stringify(body),
            signal,
        });
        const data = await response.json();
        if (!response.ok) {
            throw new ApiError(response.status, data as ApiErrorPayload);
        }
        return data as T;
    }

    createGame(body: { deal?: string; seed?: number }): Promise<GamePayload> {
        return this.request('POST', '/games', body);
    }

    getGame(id: string): Promise<GamePayload> {
        return this.request('GET', `/games/${id}`);
    }

    playMove(id: string, dest: Coord): Promise<GamePayload> {
        return this.request('POST', `/games/${id}/moves`, { dest });
    }

    engineMove(id: string): Promise<GamePayload> {
        return this.request('POST', `/games/${id}/engine-move`);
    }

    undo(id: string): Promise<GamePayload> {
        return this.request('POST', `/games/${id}/undo`);
    }

    analysis(id: string, signal?: AbortSignal): Promise<AnalysisPayload> {
        return this.request('GET', `/games/${id}/analysis`, undefined, signal);
    }
}
