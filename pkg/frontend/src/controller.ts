// App controller: DOM-free state machine between the service client and the
// renderer. The board is only ever updated from service responses (no
// optimistic updates), and at most one analysis request is in flight.

import { Api, ApiError } from './api.js';
import { decideClick, hintForClick } from './model.js';
import { AnalysisPayload, Coord, GamePayload, Side } from './types.js';

export interface AppState {
    game: GamePayload | null;
    analysis: AnalysisPayload | null;
    engineSides: Record<Side, boolean>;
    busy: boolean;
    hint: string | null;
    error: string | null;
}

export class AppController {
    state: AppState = {
        game: null,
        analysis: null,
        engineSides: { r: false, b: true },
        busy: false,
        hint: null,
        error: null,
    };

    private analysisAbort: AbortController | null = null;

    constructor(
        private api: Api,
        private onChange: (state: AppState) => void = () => undefined,
    ) {}

    private emit(): void {
        this.onChange(this.state);
    }

    private setGame(game: GamePayload): void {
        // the previous analysis belongs to the previous state; never mix them
        this.state = { ...this.state, game, analysis: null, hint: null, error: null };
        this.emit();
    }

    private fail(err: unknown): void {
        if (err instanceof ApiError) {
            this.state = { ...this.state, hint: err.payload.message, error: null };
        } else if (err instanceof DOMException && err.name === 'AbortError') {
            return; // superseded request
        } else {
            // unreachable service: show the banner, never stale evaluations
            this.state = { ...this.state, error: 'Analysis service unreachable.', analysis: null };
        }
        this.emit();
    }

    async newGame(opts: { deal?: string; seed?: number } = {}): Promise<void> {
        this.state = { ...this.state, busy: true, hint: null, error: null };
        this.emit();
        try {
            const game = await this.api.createGame(opts);
            this.state = { ...this.state, game, analysis: null, busy: false };
            this.emit();
            await this.refreshAnalysis();
            await this.driveEngine();
        } catch (err) {
            this.state = { ...this.state, busy: false };
            this.fail(err);
        }
    }

    async refreshAnalysis(): Promise<void> {
        const game = this.state.game;
        if (!game) {
            return;
        }
        this.analysisAbort?.abort();
        const control = typeof AbortController === 'undefined' ? null : new AbortController();
        this.analysisAbort = control;
        try {
            const analysis = await this.api.analysis(game.id, control?.signal);
            // only adopt a snapshot that matches the state we still display
            if (this.state.game && analysis.state === this.state.game.state) {
                this.state = { ...this.state, analysis, error: null };
                this.emit();
            }
        } catch (err) {
            this.fail(err);
        }
    }

    async clickCell(cell: Coord): Promise<void> {
        const game = this.state.game;
        if (!game || this.state.busy || game.terminal) {
            return;
        }
        const decision = decideClick(game, cell);
        if (!decision) {
            this.state = { ...this.state, hint: hintForClick(game, cell) };
            this.emit();
            return;
        }
        this.state = { ...this.state, busy: true };
        this.emit();
        try {
            const next = await this.api.playMove(game.id, decision.dest);
            this.state = { ...this.state, busy: false };
            this.setGame(next);
            await this.refreshAnalysis();
            await this.driveEngine();
        } catch (err) {
            this.state = { ...this.state, busy: false };
            this.fail(err);
        }
    }

    async engineMoveOnce(): Promise<void> {
        const game = this.state.game;
        if (!game || game.terminal) {
            return;
        }
        try {
            const next = await this.api.engineMove(game.id);
            this.setGame(next);
            await this.refreshAnalysis();
        } catch (err) {
            this.fail(err);
        }
    }

    /** Let the engine keep moving while it owns the side to move. */
    async driveEngine(): Promise<void> {
        while (
            this.state.game &&
            !this.state.game.terminal &&
            this.state.engineSides[this.state.game.to_move]
        ) {
            const before = this.state.game.state;
            await this.engineMoveOnce();
            if (this.state.game && this.state.game.state === before) {
                return; // the move failed; do not spin
            }
        }
    }

    async undo(): Promise<void> {
        const game = this.state.game;
        if (!game || this.state.busy || game.history_length === 0) {
            return;
        }
        try {
            const previous = await this.api.undo(game.id);
            this.setGame(previous);
            await this.refreshAnalysis();
        } catch (err) {
            this.fail(err);
        }
    }

    async setEngineSide(side: Side, enabled: boolean): Promise<void> {
        this.state = {
            ...this.state,
            engineSides: { ...this.state.engineSides, [side]: enabled },
        };
        this.emit();
        await this.driveEngine();
    }
}
