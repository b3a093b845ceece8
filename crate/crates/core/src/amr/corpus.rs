use std::path::Path;

use super::graph::AmrGraph;
use super::penman::{parse_penman, serialize_with_metadata};
use crate::error::{Error, PenmanError, Result};

/// Parses an AMR corpus: blank-line separated blocks of `# ::key value`
/// metadata followed by one PENMAN graph. Blocks holding only comments are
/// skipped. Graphs without `::id` are numbered by position.
pub fn parse_corpus(text: &str) -> Result<Vec<AmrGraph>, PenmanError> {
    let mut graphs = Vec::new();
    let mut block = String::new();
    let mut block_start = 1;
    let lines: Vec<&str> = text.lines().collect();
    for (i, line) in lines.iter().enumerate() {
        if line.trim().is_empty() {
            flush(&mut block, block_start, &mut graphs)?;
            block_start = i + 2;
        } else {
            block.push_str(line);
            block.push('\n');
        }
    }
    flush(&mut block, block_start, &mut graphs)?;
    Ok(graphs)
}

fn flush(block: &mut String, start: usize, graphs: &mut Vec<AmrGraph>) -> Result<(), PenmanError> {
    let has_graph = block
        .lines()
        .any(|l| !l.trim_start().starts_with('#') && !l.trim().is_empty());
    if has_graph {
        let mut graph = parse_penman(block).map_err(|mut e| {
            e.line += start - 1;
            e
        })?;
        if graph.id().is_empty() {
            let id = format!("amr{}", graphs.len() + 1);
            let mut meta = graph.metadata().to_vec();
            meta.insert(0, ("id".into(), id.clone()));
            graph = AmrGraph::from_parts(id, meta, graph.nodes().to_vec(), graph.edges().to_vec(), graph.root());
        }
        graphs.push(graph);
    }
    block.clear();
    Ok(())
}

pub fn read_corpus(path: impl AsRef<Path>) -> Result<Vec<AmrGraph>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_corpus(&text).map_err(|source| Error::Penman {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_corpus(graphs: &[AmrGraph]) -> String {
    graphs
        .iter()
        .map(serialize_with_metadata)
        .collect::<Vec<_>>()
        .join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::PenmanErrorKind;

    #[test]
    fn blocks_and_header() {
        let text = "# AMR release; corpus header\n\n# ::id a.1\n# ::snt Hi\n(h / hi)\n\n\n(b / bye)\n";
        let graphs = parse_corpus(text).unwrap();
        assert_eq!(graphs.len(), 2);
        assert_eq!(graphs[0].id(), "a.1");
        assert_eq!(graphs[1].id(), "amr2");
    }

    #[test]
    fn error_lines_are_file_relative() {
        let text = "# ::id a\n(a / x)\n\n# ::id b\n(b / y\n";
        let err = parse_corpus(text).unwrap_err();
        assert_eq!(err.kind, PenmanErrorKind::UnbalancedParens);
        assert_eq!(err.line, 5);
    }
}
