"""Módulo de visualização - gera gráficos interativos e página HTML"""

import logging
from datetime import datetime
from pathlib import Path

import plotly.graph_objects as go
from plotly.subplots import make_subplots

from transform.candidates import affix_boundaries
from transform.trie import UnknownPrefixError

logger = logging.getLogger(__name__)

CLASS_NAMES = {'P': 'Prefixos', 'S': 'Sufixos', 'R': 'Raízes'}


class ReportVisualizer:
    """Relatório HTML do vocabulário de morfemas"""

    def __init__(self, output_path='./output'):
        """Inicializa o visualizador

        Args:
            output_path: Arquivo .html ou diretório (gera report.html nele)
        """
        path = Path(output_path)
        if path.suffix == '.html':
            self.html_file = path
        else:
            self.html_file = path / 'report.html'
        self.html_file.parent.mkdir(parents=True, exist_ok=True)

    def generate_report(self, stats, morpheme_vocab, forward=None, backward=None,
                        words=(), timings=None, fits=None):
        """Gera o relatório com todos os gráficos disponíveis

        Args:
            stats: dict com estatísticas do vocabulário (nome -> valor)
            morpheme_vocab: MorphemeVocab
            forward, backward: árvores de entropia para os perfis
            words: palavras cujos perfis de entropia são desenhados
            timings: pd.DataFrame de benchmark.measure_scalability (opcional)
            fits: pd.DataFrame de benchmark.fit_summary (opcional)

        Returns:
            Path: arquivo HTML gerado
        """
        logger.info("Gerando relatório visual...")
        figs = {
            'classes': self._chart_class_counts(morpheme_vocab),
            'comprimentos': self._chart_lengths(morpheme_vocab),
        }
        if forward is not None and backward is not None and words:
            figs['entropia'] = self._chart_entropy_profiles(forward, backward, words)
        if timings is not None and not timings.empty:
            figs['escalabilidade'] = self._chart_scalability(timings, fits)

        try:
            with open(self.html_file, 'w', encoding='utf-8') as f:
                f.write(self._generate_html(stats, figs))
        except OSError as e:
            logger.error(f"Erro ao gerar relatório: {e}")
            raise
        logger.info(f"Relatório salvo em: {self.html_file}")
        return self.html_file

    def _chart_class_counts(self, morpheme_vocab):
        """Barras: número de morfemas por classe"""
        totals = morpheme_vocab.class_totals()
        codes = ['P', 'S', 'R']
        fig = go.Figure(data=[
            go.Bar(
                x=[CLASS_NAMES[c] for c in codes],
                y=[totals.get(c, 0) for c in codes],
                marker=dict(color=['#667eea', '#764ba2', '#2ca02c']),
                hovertemplate='<b>%{x}</b><br>Morfemas: %{y}<extra></extra>',
            )
        ])
        fig.update_layout(
            title='Morfemas por Classe',
            yaxis_title='Quantidade',
            height=400,
            template='plotly_white',
        )
        return fig.to_html(include_plotlyjs='cdn', div_id='chart_classes', full_html=False)

    def _chart_lengths(self, morpheme_vocab):
        lengths = [len(m) for m in morpheme_vocab.entries]
        fig = go.Figure(data=[go.Histogram(x=lengths, marker=dict(color='#667eea'))])
        fig.update_layout(
            title='Distribuição do Comprimento dos Morfemas',
            xaxis_title='Caracteres',
            yaxis_title='Morfemas',
            height=400,
            template='plotly_white',
        )
        return fig.to_html(include_plotlyjs=False, div_id='chart_lengths', full_html=False)

    def _chart_entropy_profiles(self, forward, backward, words):
        """Entropia de transição direta e invertida ao longo de cada palavra

        As fronteiras detectadas (máximos locais) aparecem como marcadores.
        """
        words = [w for w in words if w]
        fig = make_subplots(rows=len(words), cols=1, subplot_titles=words)
        for row, word in enumerate(words, start=1):
            n = len(word)
            try:
                ahead = forward.profile(word)
                behind = backward.profile(word)
            except UnknownPrefixError:
                logger.warning(f"Palavra fora do vocabulário no relatório: {word!r}")
                continue
            # o sufixo de comprimento k começa no corte n - k
            behind_x = [n - k for k in range(n + 1)]
            fig.add_trace(go.Scatter(
                x=list(range(n + 1)), y=ahead, mode='lines+markers',
                name=f'{word} (prefixos)', line=dict(color='#667eea'),
            ), row=row, col=1)
            fig.add_trace(go.Scatter(
                x=behind_x, y=behind, mode='lines+markers',
                name=f'{word} (sufixos)', line=dict(color='#764ba2', dash='dash'),
            ), row=row, col=1)
            cuts_p = affix_boundaries(forward, word)
            cuts_s = affix_boundaries(backward, word)
            fig.add_trace(go.Scatter(
                x=cuts_p, y=[ahead[i] for i in cuts_p], mode='markers',
                marker=dict(symbol='star', size=14, color='#d62728'),
                name=f'{word} fronteiras de prefixo',
            ), row=row, col=1)
            fig.add_trace(go.Scatter(
                x=cuts_s, y=[behind[n - i] for i in cuts_s], mode='markers',
                marker=dict(symbol='diamond', size=12, color='#ff7f0e'),
                name=f'{word} fronteiras de sufixo',
            ), row=row, col=1)
            fig.update_xaxes(
                tickmode='array', tickvals=list(range(n + 1)),
                ticktext=[''] + list(word), row=row, col=1,
            )
        fig.update_layout(
            title='Entropia de Transição (bits)',
            height=320 * len(words),
            template='plotly_white',
        )
        return fig.to_html(include_plotlyjs=False, div_id='chart_entropy', full_html=False)

    def _chart_scalability(self, timings, fits=None):
        fig = go.Figure()
        colors = {'mine': '#667eea', 'segment': '#764ba2'}
        for phase, color in colors.items():
            fig.add_trace(go.Scatter(
                x=timings['size'], y=timings[f'{phase}_seconds'], mode='markers',
                name=phase, marker=dict(size=10, color=color),
            ))
            if fits is not None:
                fit = fits[fits['phase'] == phase].iloc[0]
                fig.add_trace(go.Scatter(
                    x=timings['size'], y=fit['slope'] * timings['size'] + fit['intercept'],
                    mode='lines', line=dict(color=color, dash='dot'),
                    name=f'{phase} ajuste (R²={fit["r2"]:.3f})',
                ))
        fig.update_layout(
            title='Escalabilidade: tempo por tamanho do vocabulário',
            xaxis_title='Palavras',
            yaxis_title='Segundos',
            height=450,
            template='plotly_white',
        )
        return fig.to_html(include_plotlyjs=False, div_id='chart_scalability', full_html=False)

    def _generate_html(self, stats, figs):
        cards = '\n'.join(
            f'<div class="stat"><span class="label">{name}</span>'
            f'<span class="value">{value}</span></div>'
            for name, value in stats.items()
        )
        charts = '\n'.join(f'<section class="chart">{html}</section>' for html in figs.values())
        generated = datetime.now().strftime('%Y-%m-%d %H:%M:%S')
        return f"""<!DOCTYPE html>
<html lang="pt-BR">
<head>
    <meta charset="UTF-8">
    <meta name="viewport" content="width=device-width, initial-scale=1.0">
    <title>Relatório - Vocabulário de Morfemas</title>
    <style>
        body {{
            font-family: 'Segoe UI', Tahoma, Geneva, Verdana, sans-serif;
            background: #f4f5fb;
            color: #333;
            padding: 20px;
        }}
        .container {{ max-width: 1200px; margin: 0 auto; }}
        .stats {{ display: flex; flex-wrap: wrap; gap: 12px; margin-bottom: 24px; }}
        .stat {{
            background: white;
            border-radius: 8px;
            padding: 12px 18px;
            box-shadow: 0 2px 8px rgba(0,0,0,0.1);
        }}
        .label {{ display: block; font-size: 0.85em; color: #666; }}
        .value {{ font-size: 1.4em; font-weight: bold; color: #667eea; }}
        .chart {{ background: white; border-radius: 8px; margin-bottom: 24px; padding: 12px; }}
    </style>
</head>
<body>
    <div class="container">
        <h1>Vocabulário de Morfemas</h1>
        <p>Gerado em {generated}</p>
        <div class="stats">
{cards}
        </div>
{charts}
    </div>
</body>
</html>
"""
