// JSON payload shapes of the collapsi analysis service.

export type Coord = [number, number];
export type Side = 'r' | 'b';

export interface MovePayload {
    dest: Coord;
    path: Coord[];
    length: number;
}

export interface GamePayload {
    id: string;
    state: string;
    deal: string;
    mask: string;
    red: Coord;
    blue: Coord;
    to_move: Side;
    face_up_count: number;
    plies_played: number;
    terminal: boolean;
    legal_moves: MovePayload[];
    history_length: number;
    winner?: Side;
    final_score?: number;
    // present on engine-move responses
    played?: MovePayload;
    score_before?: number;
}

export interface AnalysisMove {
    move: MovePayload;
    score: number;
    mover_wins: boolean;
    plies_to_end: number;
    plies_remaining: number;
    best: boolean;
}

export interface AnalysisPayload {
    state: string;
    to_move: Side;
    score: number;
    mover_wins: boolean;
    best_move: MovePayload | null;
    plies_to_end: number;
    plies_remaining: number;
    terminal: boolean;
    moves: AnalysisMove[];
}

export interface ApiErrorPayload {
    code: string;
    message: string;
    legal_destinations?: Coord[];
}
