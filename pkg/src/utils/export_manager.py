"""
Export manager for rendering threads, traces, verdicts and experiment reports
"""

import os
import json
import logging
from typing import Dict, Optional

import graphviz

from ..core.thread import NodeKind, RegularThread


class ExportManager:
    """Renders results as text, JSON or DOT and writes reports to files"""

    def __init__(self):
        self.logger = logging.getLogger(__name__)
        self.supported_formats = {'text', 'json'}

    def thread_to_digraph(self, thread: RegularThread, name: str = 'thread') -> graphviz.Digraph:
        """
        Behaviour graph of a regular thread

        Inaction is a box labelled D, termination a box labelled S, an action
        an ellipse labelled with the action and edges labelled T and F.
        """
        dot = graphviz.Digraph(name)
        for index, node in enumerate(thread.nodes):
            state = f"s{index}"
            if node.kind is NodeKind.ACT:
                dot.node(state, str(node.action), shape='ellipse')
            else:
                dot.node(state, node.kind.value, shape='box')
        for index, node in enumerate(thread.nodes):
            if node.kind is NodeKind.ACT:
                dot.edge(f"s{index}", f"s{node.t_succ}", label='T')
                dot.edge(f"s{index}", f"s{node.f_succ}", label='F')
        return dot

    def thread_to_dot(self, thread: RegularThread, name: str = 'thread') -> str:
        """DOT source of a regular thread"""
        return self.thread_to_digraph(thread, name).source

    def to_json(self, data: Dict) -> str:
        """Deterministic JSON text"""
        return json.dumps(data, indent=2, sort_keys=True)

    def verdict_to_dict(self, relation: str, holds: Optional[bool], details: Optional[Dict] = None) -> Dict:
        """
        JSON verdict of an equivalence check

        Args:
            relation: isc, sc, beq, bcong or derive
            holds: Outcome of the check; None when it is unknown
            details: Extra fields such as witness or trace

        Returns:
            {relation, verdict, ...details}
        """
        if holds is None:
            verdict = 'unknown'
        else:
            verdict = 'equal' if holds else 'not-equal'
        data = {'relation': relation, 'verdict': verdict}
        if details:
            data.update(details)
        return data

    def render_report(self, report, format: str = 'text') -> str:
        format_lower = format.lower()
        if format_lower not in self.supported_formats:
            raise ValueError(f"Unsupported format: {format}")
        if format_lower == 'json':
            return self.to_json(report.to_dict())
        return report.to_text()

    def export_report(self, report, output_path: str, format: Optional[str] = None):
        """
        Write an experiment report

        Args:
            report: Soundness or completeness report
            output_path: Output file path
            format: 'text' or 'json'; taken from the file extension when omitted
        """
        if format is None:
            format = 'json' if os.path.splitext(output_path)[1].lower() == '.json' else 'text'
        content = self.render_report(report, format)
        try:
            self.logger.info(f"Exporting report to {output_path}")
            with open(output_path, 'w', encoding='utf-8') as f:
                f.write(content)
                f.write('\n')
        except OSError as e:
            self.logger.error(f"Failed to export report: {str(e)}")
            raise RuntimeError(f"Failed to export report to {output_path}: {str(e)}")
