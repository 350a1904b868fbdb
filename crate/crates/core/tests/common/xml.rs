use roxmltree::Node;

pub const NS: &str = "http://datacite.org/schema/kernel-4";

pub fn children<'a, 'i>(node: Node<'a, 'i>, name: &'a str) -> impl Iterator<Item = Node<'a, 'i>> + 'a {
    node.children().filter(move |n| n.has_tag_name((NS, name)))
}

pub fn child<'a, 'i>(node: Node<'a, 'i>, name: &'a str) -> Node<'a, 'i> {
    children(node, name)
        .next()
        .unwrap_or_else(|| panic!("no <{name}> under <{}>", node.tag_name().name()))
}

pub fn text<'a>(node: Node<'a, '_>) -> &'a str {
    node.text().unwrap_or("")
}
