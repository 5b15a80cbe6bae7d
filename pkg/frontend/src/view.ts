// DOM rendering of the board view-model. All geometry is in board units
// scaled by CSS; the SVG overlay draws witness paths on hover.

import { BoardView, CellView, Segment } from './model.js';
import { Coord, Side } from './types.js';

export interface ViewHandlers {
    onCellClick(cell: Coord): void;
    onCellEnter(cell: Coord): void;
    onCellLeave(): void;
}

const SVG_NS = 'http://www.w3.org/2000/svg';

export class BoardRenderer {
    private tiles: HTMLDivElement[] = [];
    private overlay: SVGSVGElement;

    constructor(private root: HTMLElement, handlers: ViewHandlers) {
        root.classList.add('board');
        for (let row = 0; row < 4; row++) {
            for (let col = 0; col < 4; col++) {
                const tile = document.createElement('div');
                tile.className = 'tile';
                tile.addEventListener('click', () => handlers.onCellClick([row, col]));
                tile.addEventListener('mouseenter', () => handlers.onCellEnter([row, col]));
                tile.addEventListener('mouseleave', () => handlers.onCellLeave());
                root.appendChild(tile);
                this.tiles.push(tile);
            }
        }
        this.overlay = document.createElementNS(SVG_NS, 'svg');
        this.overlay.classList.add('path-overlay');
        this.overlay.setAttribute('viewBox', '0 0 4 4');
        root.appendChild(this.overlay);
    }

    render(board: BoardView): void {
        board.cells.forEach((cell, i) => this.renderTile(this.tiles[i]!, cell));
    }

    private renderTile(tile: HTMLDivElement, cell: CellView): void {
        tile.className = 'tile';
        tile.classList.toggle('face-down', !cell.faceUp);
        tile.classList.toggle('clickable', cell.clickable);
        tile.classList.toggle('best', cell.badge?.best ?? false);
        tile.replaceChildren();
        if (cell.faceUp) {
            const label = document.createElement('span');
            label.className = 'card-label';
            label.textContent = cell.label;
            tile.appendChild(label);
        }
        if (cell.pawn) {
            const pawn = document.createElement('span');
            pawn.className = `pawn pawn-${cell.pawn}`;
            tile.appendChild(pawn);
        }
        if (cell.badge) {
            const badge = document.createElement('span');
            badge.className = `badge ${cell.badge.moverWins ? 'badge-win' : 'badge-loss'}`;
            badge.textContent = `${cell.badge.moverWins ? 'W' : 'L'}${cell.badge.pliesToEnd}`;
            badge.title = `${cell.badge.moverWins ? 'Winning' : 'Losing'} move; game ends after ${cell.badge.pliesToEnd} plies total`;
            tile.appendChild(badge);
        }
    }

    drawPath(segments: Segment[]): void {
        this.clearPath();
        for (const segment of segments) {
            const line = document.createElementNS(SVG_NS, 'line');
            line.setAttribute('x1', String(segment.x1));
            line.setAttribute('y1', String(segment.y1));
            line.setAttribute('x2', String(segment.x2));
            line.setAttribute('y2', String(segment.y2));
            line.setAttribute('class', segment.wrapped ? 'path-line wrapped' : 'path-line');
            this.overlay.appendChild(line);
        }
    }

    clearPath(): void {
        this.overlay.replaceChildren();
    }
}

export interface PanelElements {
    status: HTMLElement;
    hint: HTMLElement;
    error: HTMLElement;
    undo: HTMLButtonElement;
    engineMove: HTMLButtonElement;
    engineRed: HTMLInputElement;
    engineBlue: HTMLInputElement;
}

export function renderPanel(
    els: PanelElements,
    status: string,
    hint: string | null,
    error: string | null,
    busy: boolean,
    canUndo: boolean,
    canMove: boolean,
    engineSides: Record<Side, boolean>,
): void {
    els.status.textContent = status;
    els.hint.textContent = hint ?? '';
    els.hint.hidden = !hint;
    els.error.textContent = error ?? '';
    els.error.hidden = !error;
    els.undo.disabled = busy || !canUndo;
    els.engineMove.disabled = busy || !canMove;
    els.engineRed.checked = engineSides.r;
    els.engineBlue.checked = engineSides.b;
}
