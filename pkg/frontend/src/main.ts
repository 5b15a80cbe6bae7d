import { Client } from './api.js';
import { AppController } from './controller.js';
import { buildBoard, pathSegments, witnessPath } from './model.js';
import { BoardRenderer, PanelElements, renderPanel } from './view.js';
import { Coord } from './types.js';

const apiBase =
    new URLSearchParams(location.search).get('api') ?? 'http://127.0.0.1:8000';

const el = <T extends HTMLElement>(id: string): T => {
    const found = document.getElementById(id);
    if (!found) {
        throw new Error(`missing element #${id}`);
    }
    return found as T;
};

const panel: PanelElements = {
    status: el('status'),
    hint: el('hint'),
    error: el('error'),
    undo: el<HTMLButtonElement>('undo'),
    engineMove: el<HTMLButtonElement>('engine-move'),
    engineRed: el<HTMLInputElement>('engine-red'),
    engineBlue: el<HTMLInputElement>('engine-blue'),
};

const controller = new AppController(new Client(apiBase), (state) => {
    if (state.game) {
        renderer.render(buildBoard(state.game, state.analysis));
    }
    renderer.clearPath();
    renderPanel(
        panel,
        state.game ? buildBoard(state.game, state.analysis).status : 'Deal a board to start.',
        state.hint,
        state.error,
        state.busy,
        (state.game?.history_length ?? 0) > 0,
        state.game !== null && !state.game.terminal,
        state.engineSides,
    );
});

const renderer = new BoardRenderer(el('board'), {
    onCellClick: (cell: Coord) => void controller.clickCell(cell),
    onCellEnter: (cell: Coord) => {
        const game = controller.state.game;
        if (!game || game.terminal) {
            return;
        }
        const path = witnessPath(game, cell);
        if (path) {
            const origin: Coord = game.to_move === 'r' ? game.red : game.blue;
            renderer.drawPath(pathSegments(origin, path));
        }
    },
    onCellLeave: () => renderer.clearPath(),
});

el<HTMLButtonElement>('new-random').addEventListener('click', () => {
    void controller.newGame({});
});
el<HTMLButtonElement>('new-deal').addEventListener('click', () => {
    const deal = el<HTMLInputElement>('deal-input').value.trim();
    void controller.newGame(deal ? { deal } : {});
});
panel.undo.addEventListener('click', () => void controller.undo());
panel.engineMove.addEventListener('click', async () => {
    await controller.engineMoveOnce();
    await controller.driveEngine();
});
panel.engineRed.addEventListener('change', () => {
    void controller.setEngineSide('r', panel.engineRed.checked);
});
panel.engineBlue.addEventListener('change', () => {
    void controller.setEngineSide('b', panel.engineBlue.checked);
});

void controller.newGame({});
