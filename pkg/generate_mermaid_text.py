"""Write the Mermaid source of the analysis workflow to workflow_diagram.mmd."""

import sys
from pathlib import Path

from workflow import compile_workflow


def mermaid_text() -> str:
    return compile_workflow().get_graph().draw_mermaid()


if __name__ == "__main__":
    target = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("workflow_diagram.mmd")
    text = mermaid_text()
    target.write_text(text, encoding="utf-8")
    print(text)
