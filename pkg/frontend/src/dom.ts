/** Tiny DOM construction helpers; no framework, no virtual DOM. */

type Child = Node | string;

export function el(
  tag: string,
  attrs: Record<string, string> = {},
  ...children: Child[]
): HTMLElement {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  for (const child of children) {
    node.append(child);
  }
  return node;
}

export function mount(root: HTMLElement, ...children: Child[]): void {
  root.replaceChildren(...children);
}
