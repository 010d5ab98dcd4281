/** Info-level menu on the right edge. Native buttons keep it keyboard
 * reachable; the active level is highlighted and survives re-renders. */

export interface LevelMenu {
  setActive(level: number): void;
  activeLevel(): number;
}

export function buildLevelMenu(
  container: HTMLElement,
  levels: readonly number[],
  initial: number,
  onSelect: (level: number) => void,
): LevelMenu {
  container.textContent = '';
  container.setAttribute('role', 'group');
  container.setAttribute('aria-label', 'information level');
  let active = initial;
  const buttons = new Map<number, HTMLButtonElement>();

  const highlight = () => {
    for (const [level, button] of buttons) {
      const on = level === active;
      button.classList.toggle('active', on);
      button.setAttribute('aria-pressed', String(on));
    }
  };

  for (const level of levels) {
    const button = document.createElement('button');
    button.type = 'button';
    button.dataset.level = String(level);
    button.textContent = level === 0 ? 'level 0 (names)' : `level ${level}`;
    button.addEventListener('click', () => {
      active = level;
      highlight();
      onSelect(level);
    });
    buttons.set(level, button);
    container.appendChild(button);
  }
  highlight();

  return {
    setActive(level: number) {
      active = level;
      highlight();
    },
    activeLevel: () => active,
  };
}
