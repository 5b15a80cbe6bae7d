// Pure view-model layer: everything rendered derives from service payloads.
// No game rules are computed here; the service is the single source of truth.

import { AnalysisPayload, Coord, GamePayload, Side } from './types.js';

export interface Badge {
    moverWins: boolean;
    pliesToEnd: number;
    best: boolean;
}

export interface CellView {
    row: number;
    col: number;
    label: string; // A 2 3 4 J
    faceUp: boolean;
    pawn: Side | null;
    badge: Badge | null;
    clickable: boolean;
}

export interface BoardView {
    cells: CellView[]; // 16, row-major
    toMove: Side;
    terminal: boolean;
    status: string;
}

const sideName = (side: Side) => (side === 'r' ? 'Red' : 'Blue');

export function statusLine(game: GamePayload): string {
    if (game.terminal && game.winner) {
        return `${sideName(game.winner)} wins with ${game.face_up_count} cards face-up after ${game.plies_played} plies`;
    }
    return `${sideName(game.to_move)} to move (ply ${game.plies_played + 1})`;
}

/** Badges are taken from one analysis response, and only if it matches the
 *  game state exactly; a stale snapshot yields no badges at all. */
export function buildBoard(game: GamePayload, analysis: AnalysisPayload | null): BoardView {
    const mask = parseInt(game.mask, 16);
    const rows = game.deal.split('/');
    const destinations = new Set(game.legal_moves.map((m) => keyOf(m.dest)));
    const fresh = analysis !== null && analysis.state === game.state;
    const badges = new Map<string, Badge>();
    if (fresh && analysis) {
        for (const entry of analysis.moves) {
            badges.set(keyOf(entry.move.dest), {
                moverWins: entry.mover_wins,
                pliesToEnd: entry.plies_to_end,
                best: entry.best,
            });
        }
    }
    const cells: CellView[] = [];
    for (let row = 0; row < 4; row++) {
        for (let col = 0; col < 4; col++) {
            const key = keyOf([row, col]);
            cells.push({
                row,
                col,
                label: rows[row]?.[col] ?? '?',
                faceUp: (mask >> (4 * row + col)) % 2 === 1,
                pawn: samePos(game.red, [row, col]) ? 'r' : samePos(game.blue, [row, col]) ? 'b' : null,
                badge: badges.get(key) ?? null,
                clickable: !game.terminal && destinations.has(key),
            });
        }
    }
    return { cells, toMove: game.to_move, terminal: game.terminal, status: statusLine(game) };
}

const keyOf = (c: Coord) => `${c[0]},${c[1]}`;
const samePos = (a: Coord, b: Coord) => a[0] === b[0] && a[1] === b[1];

/** A click is a move only when the service listed the cell as a destination. */
export function decideClick(game: GamePayload, cell: Coord): { dest: Coord } | null {
    if (game.terminal) {
        return null;
    }
    const legal = game.legal_moves.some((m) => samePos(m.dest, cell));
    return legal ? { dest: cell } : null;
}

/** Why an illegal click did nothing, when there is something to say. */
export function hintForClick(game: GamePayload, cell: Coord): string | null {
    if (game.terminal) {
        return null;
    }
    const opponent: Coord = game.to_move === 'r' ? game.blue : game.red;
    if (samePos(cell, opponent)) {
        return 'A move may not end on the space occupied by the opponent\'s pawn.';
    }
    const mover: Coord = game.to_move === 'r' ? game.red : game.blue;
    if (samePos(cell, mover)) {
        return 'The moving pawn cannot end where it started; its card flips face-down.';
    }
    return 'Not a reachable destination: moves go exactly the card\'s number of steps over face-up cards.';
}

/** Witness path for a destination, straight from the service payload. */
export function witnessPath(game: GamePayload, dest: Coord): Coord[] | null {
    const move = game.legal_moves.find((m) => samePos(m.dest, dest));
    return move ? move.path : null;
}

export interface Segment {
    x1: number;
    y1: number;
    x2: number;
    y2: number;
    wrapped: boolean;
}

/** Path polyline in board units (cell centers), splitting each toroidal wrap
 *  into an exit stub and an entry stub on opposite edges. */
export function pathSegments(origin: Coord, path: Coord[]): Segment[] {
    const segments: Segment[] = [];
    let prev = origin;
    for (const cell of path) {
        const dr = cell[0] - prev[0];
        const dc = cell[1] - prev[1];
        if (Math.abs(dr) > 1 || Math.abs(dc) > 1) {
            // wrapped step: unit direction seen from prev is the opposite sign
            const ur = dr === 0 ? 0 : dr > 0 ? -1 : 1;
            const uc = dc === 0 ? 0 : dc > 0 ? -1 : 1;
            segments.push(seg(prev, [prev[0] + ur / 2, prev[1] + uc / 2], true));
            segments.push(seg([cell[0] - ur / 2, cell[1] - uc / 2], cell, true));
        } else {
            segments.push(seg(prev, cell, false));
        }
        prev = cell;
    }
    return segments;
}

function seg(a: [number, number], b: [number, number], wrapped: boolean): Segment {
    return { x1: a[1] + 0.5, y1: a[0] + 0.5, x2: b[1] + 0.5, y2: b[0] + 0.5, wrapped };
}
